use std::ffi::OsString;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::time::Instant;

use clap::{CommandFactory, Parser};
use det_waring::decompositions::{bounds_table, krishna_makam_det3, main_decomposition, PowerDecomposition, Scheme};
use det_waring::independence::{promotion_check, rank_oracle, separation_matrix};
use det_waring::symmetry::{
    action_summary, affine_lemma_check, all_symmetries, enumerate_symmetries, sample_symmetries, sign_formula_check,
    transpose_closure,
};
use det_waring::varieties::{
    extra_generators, finite_field_locus_count, reduce_rho_quadrics_d3, vanish_check, vanish_on_points, variety_points,
    LocusMode,
};
use det_waring::verify::{
    det_coefficient, theorem_coefficient, verify_lemma, verify_power_decomposition, verify_product_identity, IJPair,
    VerificationReport, VerifyMode, VerifyOptions,
};
use det_waring::Exec;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{Cli, Command, Format, ModeArg, Opts, SchemeArg};
use crate::json::{emit_decomposition, emit_product, JsonCyc};
use crate::latex::{decomposition_latex, decomposition_text, product_latex, product_text};
use crate::report::{CheckResult, CommandEcho, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Rendered output and whether every check held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub outcome: bool,
}

/// Number of sampled elements in the `d = 6` action check.
pub const ACTION_SAMPLE: usize = 1000;
/// Number of sampled index pairs in `lemma-check`.
pub const PAIR_SAMPLE: usize = 100;

fn exec(opts: &Opts) -> Exec {
    if opts.jobs == 1 {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// `d` from the options or `default`, checked against the default budget
/// and, with `--force`, the extended one.
fn pick_d(
    opts: &Opts,
    default: usize,
    budget: RangeInclusive<usize>,
    forced: RangeInclusive<usize>,
    what: &str,
) -> Result<usize, CliError> {
    let d = opts.d.unwrap_or(default);
    if budget.contains(&d) || (opts.force && forced.contains(&d)) {
        return Ok(d);
    }
    if forced.contains(&d) {
        Err(usage(format!(
            "d = {d} exceeds the default range {}..={} for {what}; pass --force to run it",
            budget.start(),
            budget.end()
        )))
    } else {
        Err(usage(format!("d = {d} is outside {}..={} for {what}", forced.start(), forced.end())))
    }
}

fn echo(cmd: Command, opts: &Opts, d: Option<usize>) -> CommandEcho {
    let scheme = matches!(cmd, Command::Decompose | Command::Verify | Command::Bench).then(|| opts.scheme.name().to_string());
    let mode = matches!(cmd, Command::Verify).then(|| {
        match opts.mode {
            ModeArg::Expansion => "expansion",
            ModeArg::Streaming => "streaming",
            ModeArg::Both => "both",
        }
        .to_string()
    });
    CommandEcho {
        name: cmd.name().to_string(),
        d,
        scheme,
        prime: opts.prime.filter(|_| cmd == Command::Equations),
        mode,
        full: opts.full,
        force: opts.force,
        seed: opts.seed,
    }
}

fn render(report: &Report, format: Format) -> Result<Output, CliError> {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
        Format::Latex => {
            return Err(usage(format!(
                "--format latex is available for decompose and bounds, not {}",
                report.command.name
            )))
        }
    };
    Ok(Output {
        text,
        outcome: report.outcome,
    })
}

fn power_scheme(s: SchemeArg) -> Option<Scheme> {
    match s {
        SchemeArg::Main => Some(Scheme::Main),
        SchemeArg::Classical => Some(Scheme::Classical),
        SchemeArg::Gurvits => Some(Scheme::Gurvits),
        SchemeArg::Monomial => Some(Scheme::Monomial),
        SchemeArg::KrishnaMakam => None,
    }
}

fn krishna_makam_d(opts: &Opts) -> Result<usize, CliError> {
    match opts.d.unwrap_or(3) {
        3 => Ok(3),
        d => Err(usage(format!("the krishna-makam identity exists only for d = 3, got {d}"))),
    }
}

/// `(budget, forced)` ranges of `d` for building a scheme.
fn build_ranges(s: Scheme) -> (RangeInclusive<usize>, RangeInclusive<usize>) {
    match s {
        Scheme::Main => (1..=6, 1..=8),
        Scheme::Classical => (1..=5, 1..=7),
        Scheme::Gurvits => (1..=6, 1..=8),
        Scheme::Monomial => (1..=8, 1..=12),
    }
}

/// `(budget, forced)` ranges of `d` for verifying a scheme.
fn verify_ranges(s: Scheme) -> (RangeInclusive<usize>, RangeInclusive<usize>) {
    match s {
        Scheme::Main => (1..=6, 1..=7),
        Scheme::Classical => (1..=5, 1..=6),
        Scheme::Gurvits => (1..=5, 1..=6),
        Scheme::Monomial => (1..=8, 1..=10),
    }
}

fn build(s: Scheme, d: usize) -> Result<PowerDecomposition, CliError> {
    s.build(d).map_err(|e| usage(e.to_string()))
}

fn decompose(opts: &Opts) -> Result<Output, CliError> {
    let text = match power_scheme(opts.scheme) {
        None => {
            krishna_makam_d(opts)?;
            let km = krishna_makam_det3();
            match opts.format {
                Format::Json => emit_product(&km) + "\n",
                Format::Latex => product_latex(&km),
                Format::Text => product_text(&km),
            }
        }
        Some(s) => {
            let (budget, forced) = build_ranges(s);
            let d = pick_d(opts, 3, budget, forced, &format!("decompose --scheme {s}"))?;
            let dec = build(s, d)?;
            match opts.format {
                Format::Json => emit_decomposition(&dec) + "\n",
                Format::Latex => decomposition_latex(&dec),
                Format::Text => decomposition_text(&dec),
            }
        }
    };
    Ok(Output { text, outcome: true })
}

fn verification_details(r: &VerificationReport) -> Value {
    json!({
        "scheme": r.scheme.name(),
        "d": r.d,
        "mode": r.mode.name(),
        "equal": r.equal,
        "terms": r.term_count,
        "distinct_monomials": r.distinct_monomials,
        "surviving_monomials": r.surviving_monomials,
        "witness": r.witness.as_ref().map(|w| json!({
            "monomial": w.monomial.to_string(),
            "expected": JsonCyc::from_cyc(&w.expected),
            "actual": JsonCyc::from_cyc(&w.actual),
        })),
    })
}

fn modes(m: ModeArg) -> Vec<VerifyMode> {
    match m {
        ModeArg::Expansion => vec![VerifyMode::Expansion],
        ModeArg::Streaming => vec![VerifyMode::Streaming],
        ModeArg::Both => vec![VerifyMode::Expansion, VerifyMode::Streaming],
    }
}

fn verify(opts: &Opts) -> Result<Report, CliError> {
    let Some(scheme) = power_scheme(opts.scheme) else {
        let d = krishna_makam_d(opts)?;
        let mut report = Report::new(echo(Command::Verify, opts, Some(d)));
        let t = Instant::now();
        let r = verify_product_identity(&krishna_makam_det3());
        if opts.timings {
            report.time("verify", ms(t));
        }
        report.push(CheckResult::new(
            "product identity",
            r.equal,
            json!({"terms": 5, "expanded_terms": r.expanded_terms, "final_monomials": r.final_monomials}),
        ));
        return Ok(report);
    };
    let (budget, forced) = verify_ranges(scheme);
    let d = pick_d(opts, 3, budget, forced, &format!("verify --scheme {scheme}"))?;
    let mut report = Report::new(echo(Command::Verify, opts, Some(d)));
    let t = Instant::now();
    let dec = build(scheme, d)?;
    if opts.timings {
        report.time("build", ms(t));
    }
    let mut runs = Vec::new();
    for mode in modes(opts.mode) {
        let r = verify_power_decomposition(
            &dec,
            &VerifyOptions {
                mode,
                exec: exec(opts),
                exhaustive: false,
            },
        );
        if opts.timings {
            report.time(mode.name(), r.elapsed.as_secs_f64() * 1e3);
        }
        report.push(CheckResult::new(format!("identity ({})", mode.name()), r.equal, verification_details(&r)));
        runs.push(r);
    }
    if let [a, b] = &runs[..] {
        report.push(CheckResult::new("modes agree", a.same_outcome(b), json!({})));
    }
    Ok(report)
}

fn shuffled(rng: &mut ChaCha8Rng, d: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=d).collect();
    v.shuffle(rng);
    v
}

fn index_tuple(rng: &mut ChaCha8Rng, d: usize, perm_bias: f64) -> Vec<usize> {
    if rng.gen_bool(perm_bias) {
        shuffled(rng, d)
    } else {
        (0..d).map(|_| rng.gen_range(1..=d)).collect()
    }
}

fn lemma_check(opts: &Opts) -> Result<Report, CliError> {
    let d = pick_d(opts, 3, 1..=6, 1..=8, "lemma-check")?;
    let mut report = Report::new(echo(Command::LemmaCheck, opts, Some(d)));
    let t = Instant::now();
    let l = verify_lemma(d).map_err(|e| usage(e.to_string()))?;
    if opts.timings {
        report.time("lemma", ms(t));
    }
    report.push(CheckResult::new(
        "lemma coefficients",
        l.holds,
        json!({
            "monomials_checked": l.monomials_checked,
            "nonzero": l.nonzero,
            "first_failure": l.first_failure.map(|m| m.entries().to_vec()),
        }),
    ));

    if d <= 6 {
        let t = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let scale = main_decomposition(d).map_err(|e| usage(e.to_string()))?.scale;
        let mut nonzero = 0usize;
        let mut failure = None;
        for _ in 0..PAIR_SAMPLE {
            let rows = index_tuple(&mut rng, d, 0.5);
            let cols = index_tuple(&mut rng, d, 0.7);
            let pair = IJPair::new(rows, cols).map_err(|e| usage(e.to_string()))?;
            let expected = det_coefficient(&pair).map_err(|e| usage(e.to_string()))?.scale(&scale);
            let got = theorem_coefficient(&pair).map_err(|e| usage(e.to_string()))?;
            nonzero += usize::from(!expected.is_zero());
            if got != expected && failure.is_none() {
                failure = Some(json!({"rows": pair.rows, "cols": pair.cols}));
            }
        }
        if opts.timings {
            report.time("pairs", ms(t));
        }
        report.push(CheckResult::new(
            "coefficient formula on sampled index pairs",
            failure.is_none(),
            json!({"samples": PAIR_SAMPLE, "nonzero": nonzero, "seed": opts.seed, "first_failure": failure}),
        ));
    }
    Ok(report)
}

fn independence(opts: &Opts) -> Result<Report, CliError> {
    let d = pick_d(opts, 3, 2..=5, 2..=5, "independence")?;
    let mut report = Report::new(echo(Command::Independence, opts, Some(d)));
    let err = |e: det_waring::independence::IndependenceError| usage(e.to_string());

    let t = Instant::now();
    let s = separation_matrix(d).map_err(err)?.check();
    report.push(CheckResult::new(
        "separating functionals",
        s.holds(),
        json!({
            "size": s.size,
            "diagonal": "(-1)^((d+1)j) d",
            "diagonal_ok": s.diagonal_ok,
            "off_diagonal_nonzero": s.off_diagonal_nonzero,
            "first_violation": s.first_violation,
        }),
    ));
    let promoted = promotion_check(d).map_err(err)?;
    report.push(CheckResult::new("degree-d promotion", promoted, json!({})));
    if opts.timings {
        report.time("separation", ms(t));
    }

    if d <= 4 || opts.force {
        let t = Instant::now();
        let r = rank_oracle(d, opts.force).map_err(err)?;
        if opts.timings {
            report.time("rank", ms(t));
        }
        report.push(CheckResult::new(
            "rank of expanded terms",
            r.rank == r.terms,
            json!({"terms": r.terms, "columns": r.columns, "rank": r.rank}),
        ));
    }
    Ok(report)
}

fn symmetries(opts: &Opts) -> Result<Report, CliError> {
    let d = pick_d(opts, 3, 2..=6, 2..=6, "symmetries")?;
    if opts.full && d > 4 && !opts.force {
        return Err(usage(format!(
            "symmetries --full runs up to d = 4 by default; pass --force for d = {d}"
        )));
    }
    let mut report = Report::new(echo(Command::Symmetries, opts, Some(d)));
    let err = |e: det_waring::symmetry::SymmetryError| usage(e.to_string());

    let t = Instant::now();
    let exhaustive = opts.full && d <= 5;
    let e = enumerate_symmetries(d, exhaustive).map_err(err)?;
    if opts.timings {
        report.time("enumerate", ms(t));
    }
    let mut order = CheckResult::new(
        "group order",
        e.matches_formula() && e.half_split(),
        json!({
            "tilde_order": e.tilde_order,
            "h_order": e.h_order,
            "reversing": e.reversing,
            "formula": e.formula,
            "formula_text": "d^3 phi(d) d! / 2",
            "printed_table": e.table,
            "matches_formula": e.matches_formula(),
            "matches_printed_table": e.matches_table(),
            "half_split": e.half_split(),
        }),
    );
    if e.matches_table() == Some(false) {
        order = order.flag(format!(
            "enumerated |H| = {} differs from the printed table value {}",
            e.h_order,
            e.table.unwrap_or_default()
        ));
    }
    report.push(order);
    if let Some(f) = e.faithful {
        report.push(CheckResult::new("faithful action", f, json!({"checked": e.tilde_order})));
    }

    if opts.full {
        let t = Instant::now();
        let dec = main_decomposition(d).map_err(|e| usage(e.to_string()))?;
        let (elements, sampled) = if d <= 5 {
            (all_symmetries(d), false)
        } else {
            (sample_symmetries(d, ACTION_SAMPLE, opts.seed), true)
        };
        let a = action_summary(&dec, &elements, sampled).map_err(err)?;
        if opts.timings {
            report.time("action", ms(t));
        }
        report.push(CheckResult::new(
            "action on terms",
            a.holds(),
            json!({
                "checked": a.checked,
                "sign_preserving": a.preserving,
                "sign_reversing": a.reversing,
                "failures": a.failures,
                "multiplier_mismatches": a.multiplier_mismatches,
                "sampled": a.sampled,
                "seed": sampled.then_some(opts.seed),
            }),
        ));
    }

    let t = Instant::now();
    let al = affine_lemma_check(d).map_err(err)?;
    report.push(CheckResult::new(
        "affine lemma",
        al.holds,
        json!({"passing": al.passing, "total": al.total, "affine_group_order": al.passing, "constructive": al.constructive_ok}),
    ));
    let sf = sign_formula_check(d).map_err(err)?;
    report.push(CheckResult::new(
        "sign formulas",
        sf.holds,
        json!({
            "shifts_checked": sf.shifts_checked,
            "units_checked": sf.units_checked,
            "failure": sf.failure.map(|f| json!({"a": f.a, "b": f.b})),
        }),
    ));
    let tc = transpose_closure(d).map_err(err)?;
    let expected_closed = d <= 3;
    report.push(CheckResult::new(
        "transpose closure",
        tc.closed == expected_closed,
        json!({
            "closed": tc.closed,
            "expected_closed": expected_closed,
            "witness": tc.witness.as_ref().map(|w| w.to_string()),
            "witness_transpose": tc.witness.as_ref().map(|w| format!("w^{} P_{} D^{}", w.k, w.sigma.inverse(), w.j)),
        }),
    ));
    if opts.timings {
        report.time("lemmas", ms(t));
    }
    Ok(report)
}

fn equations(opts: &Opts) -> Result<Report, CliError> {
    let d = pick_d(opts, 3, 2..=6, 2..=6, "equations")?;
    let mut report = Report::new(echo(Command::Equations, opts, Some(d)));
    let err = |e: det_waring::varieties::VarietyError| usage(e.to_string());

    let t = Instant::now();
    for (name, v) in vanish_on_points(d).map_err(err)? {
        report.push(CheckResult::new(
            format!("{name} quadrics vanish"),
            v.all_vanish(),
            json!({"generators": v.generators, "points": v.points, "failing": v.failing}),
        ));
    }
    if d == 3 || d == 4 {
        let points = variety_points(d);
        for fam in extra_generators(d).map_err(err)? {
            let v = vanish_check(&fam.generators, &points);
            report.push(CheckResult::new(
                format!("{} generators vanish", fam.name),
                v.all_vanish(),
                json!({
                    "generators": v.generators,
                    "raw_tuples": fam.raw_count,
                    "distinct": fam.distinct_count,
                    "points": v.points,
                    "failing": v.failing,
                    "failing_polynomials": v.failing.iter().take(3).map(|&k| fam.generators[k].to_string()).collect::<Vec<_>>(),
                }),
            ));
        }
    }
    if d == 3 {
        let rows = reduce_rho_quadrics_d3().map_err(err)?;
        let ok = rows.iter().all(|r| r.integral && r.residual_in_ideal);
        report.push(CheckResult::new(
            "rho quadrics reduce to extra generators",
            ok,
            json!({
                "rows": rows.iter().map(|r| json!({
                    "i": r.i,
                    "coefficients": r.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "integral": r.integral,
                    "residual_in_monomial_ideal": r.residual_in_ideal,
                })).collect::<Vec<_>>(),
            }),
        ));
    }
    if opts.timings {
        report.time("vanishing", ms(t));
    }

    if let Some(p) = opts.prime {
        let mode = if opts.full { LocusMode::Full } else { LocusMode::Staged };
        if mode == LocusMode::Full && d > 3 && !opts.force {
            return Err(usage("the full GF(p) scan runs up to d = 3 by default; pass --force"));
        }
        let t = Instant::now();
        let l = finite_field_locus_count(d, p, mode).map_err(err)?;
        if opts.timings {
            report.time("locus", ms(t));
        }
        report.push(CheckResult::new(
            "finite-field locus",
            l.holds(),
            json!({
                "p": l.p,
                "mode": l.mode.name(),
                "omega": l.omega,
                "candidates": l.candidates,
                "solutions": l.solutions,
                "normalized": l.normalized,
                "projective": l.projective,
                "expected": l.expected,
                "homogeneous": l.homogeneous,
                "geometric_row_sums": l.geometric,
                "all_known_points": l.all_known,
                "monomial_quadrics_consistent": l.monomial_consistent,
            }),
        ));
    }
    Ok(report)
}

fn bounds(opts: &Opts) -> Result<Output, CliError> {
    let d = pick_d(opts, 9, 2..=20, 2..=20, "bounds")?;
    let rows = bounds_table(d).map_err(|e| usage(e.to_string()))?;
    let consistent = rows.iter().all(|r| r.consistent());
    let text = match opts.format {
        Format::Latex => bounds_latex(&rows),
        Format::Json | Format::Text => {
            let mut report = Report::new(echo(Command::Bounds, opts, Some(d)));
            let table: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "d": r.d,
                        "classical": r.classical.to_string(),
                        "derksen": r.derksen.to_string(),
                        "gurvits": r.gurvits.to_string(),
                        "cglv": r.cglv.as_ref().map(|c| c.to_string()),
                        "new": r.new.to_string(),
                        "lower": r.lower.to_string(),
                    })
                })
                .collect();
            report.push(CheckResult::new("new bound is the smallest upper bound", consistent, json!({"rows": table})));
            return render(&report, opts.format);
        }
    };
    Ok(Output { text, outcome: consistent })
}

fn bounds_latex(rows: &[det_waring::decompositions::BoundsRow]) -> String {
    let mut out = format!("\\begin{{tabular}}{{l{}}}\n", "r".repeat(rows.len()));
    let line = |name: &str, cells: Vec<String>| format!("{name} & {} \\\\\n", cells.join(" & "));
    out += &line("$d$", rows.iter().map(|r| r.d.to_string()).collect());
    out += "\\hline\n";
    out += &line("classical", rows.iter().map(|r| r.classical.to_string()).collect());
    out += &line("Derksen", rows.iter().map(|r| r.derksen.to_string()).collect());
    out += &line("Gurvits", rows.iter().map(|r| r.gurvits.to_string()).collect());
    out += &line(
        "CGLV",
        rows.iter().map(|r| r.cglv.as_ref().map_or("--".to_string(), |c| c.to_string())).collect(),
    );
    out += &line("new", rows.iter().map(|r| r.new.to_string()).collect());
    out += "\\hline\n";
    out += &line("lower", rows.iter().map(|r| r.lower.to_string()).collect());
    out += "\\end{tabular}\n";
    out
}

fn bench(opts: &Opts) -> Result<Report, CliError> {
    let Some(scheme) = power_scheme(opts.scheme) else {
        return Err(usage("bench supports the power-sum schemes only"));
    };
    let (budget, forced) = verify_ranges(scheme);
    let d = pick_d(opts, 4, budget, forced, &format!("bench --scheme {scheme}"))?;
    let mut report = Report::new(echo(Command::Bench, opts, Some(d)));
    let dec = build(scheme, d)?;
    let mut first: Option<VerificationReport> = None;
    for mode in [VerifyMode::Expansion, VerifyMode::Streaming] {
        for ex in [Exec::Sequential, Exec::Parallel] {
            let r = verify_power_decomposition(
                &dec,
                &VerifyOptions {
                    mode,
                    exec: ex,
                    exhaustive: false,
                },
            );
            let label = format!("{} {}", mode.name(), if ex == Exec::Sequential { "sequential" } else { "parallel" });
            let agree = first.as_ref().is_none_or(|f| f.same_outcome(&r));
            let mut details = verification_details(&r);
            details["elapsed_ms"] = json!(r.elapsed.as_secs_f64() * 1e3);
            report.push(CheckResult::new(label, r.equal && agree, details));
            first.get_or_insert(r);
        }
    }
    Ok(report)
}

/// Runs one parsed invocation inside the current thread pool.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let opts = &cli.opts;
    match cli.command {
        Command::Decompose => decompose(opts),
        Command::Bounds => bounds(opts),
        Command::Verify => render(&verify(opts)?, opts.format),
        Command::LemmaCheck => render(&lemma_check(opts)?, opts.format),
        Command::Independence => render(&independence(opts)?, opts.format),
        Command::Symmetries => render(&symmetries(opts)?, opts.format),
        Command::Equations => render(&equations(opts)?, opts.format),
        Command::Bench => render(&bench(opts)?, opts.format),
    }
}

/// Parses `args`, runs the command with `--jobs` worker threads and writes
/// the result. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.opts.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 2;
        }
    };
    let result = pool.install(|| execute(&cli)).and_then(|out| {
        match &cli.opts.out {
            Some(path) => std::fs::write(path, &out.text)?,
            None => std::io::stdout().lock().write_all(out.text.as_bytes())?,
        }
        Ok(out.outcome)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let mut cmd = Cli::command();
            eprintln!("error: {e}\n\n{}\n\nFor more information, try '--help'.", cmd.render_usage());
            2
        }
    }
}
