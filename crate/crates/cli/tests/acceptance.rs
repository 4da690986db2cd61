//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use det_waring::decompositions::{bounds_table, krishna_makam_det3, Scheme};
use det_waring::independence::{rank_oracle, separation_matrix};
use det_waring::perm::Perm;
use det_waring::symmetry::{
    action_summary, affine_lemma_check, enumerate_symmetries, sign_formula_check, transpose_closure, MonoMatrix,
};
use det_waring::varieties::{
    extra_generators, finite_field_locus_count, reduce_rho_quadrics_d3, vanish_check, vanish_on_points, variety_points,
    LocusMode,
};
use det_waring::verify::{verify_lemma, verify_power_decomposition, verify_product_identity, VerifyMode, VerifyOptions};
use det_waring::Exec;

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: impl Into<String>) {
        let note = note.into();
        if !ok {
            self.pass = false;
            self.notes.push(format!("FAILED {note}"));
        } else {
            self.notes.push(note);
        }
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn opts(mode: VerifyMode, exec: Exec) -> VerifyOptions {
    VerifyOptions {
        mode,
        exec,
        exhaustive: false,
    }
}

fn verify_scheme(o: &mut Outcome, scheme: Scheme, d: usize, budget: Duration) {
    let t = Instant::now();
    let dec = scheme.build(d).unwrap();
    let r = verify_power_decomposition(&dec, &VerifyOptions::default());
    let el = t.elapsed();
    o.check(
        r.equal && el <= budget,
        format!("{scheme} d={d}: {} terms, equal={} in {}", r.term_count, r.equal, secs(el)),
    );
}

fn c1() -> Outcome {
    let mut o = Outcome::new();
    for d in 2..=6 {
        let budget = Duration::from_secs(if d <= 5 { 5 } else { 60 });
        verify_scheme(&mut o, Scheme::Main, d, budget);
    }
    o
}

fn c2() -> Outcome {
    let mut o = Outcome::new();
    for scheme in [Scheme::Classical, Scheme::Gurvits] {
        for d in 2..=5 {
            verify_scheme(&mut o, scheme, d, Duration::from_secs(30));
        }
    }
    o
}

fn c3() -> Outcome {
    let mut o = Outcome::new();
    for d in 2..=6 {
        verify_scheme(&mut o, Scheme::Monomial, d, Duration::from_secs(1));
    }
    let t = Instant::now();
    let km = verify_product_identity(&krishna_makam_det3());
    o.check(km.equal && t.elapsed() <= Duration::from_secs(1), format!("5-term product d=3 equal={}", km.equal));
    o
}

fn c4() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for d in 2..=5 {
        let r = verify_lemma(d).unwrap();
        o.check(r.holds, format!("d={d}: {} monomials", r.monomials_checked));
    }
    let el = t.elapsed();
    o.check(el <= Duration::from_secs(10), format!("total {}", secs(el)));
    o
}

/// The published bounds table for `d = 2..9`; `None` marks an empty cell.
const PRINTED: [(&str, [Option<u64>; 8]); 6] = [
    ("classical", [Some(4), Some(24), Some(192), Some(1920), Some(23040), Some(322560), Some(5160960), Some(92897280)]),
    ("derksen", [Some(4), Some(20), Some(160), Some(1600), Some(16000), Some(224000), Some(3584000), Some(53760000)]),
    ("gurvits", [Some(6), Some(24), Some(120), Some(720), Some(5040), Some(40320), Some(362880), Some(3628800)]),
    ("cglv", [None, Some(18), None, None, None, None, None, None]),
    ("new", [Some(4), Some(18), Some(96), Some(600), Some(4320), Some(35280), Some(322560), Some(3265920)]),
    ("lower", [Some(4), Some(17), Some(50), Some(182), Some(672), Some(2508), Some(9438), Some(35750)]),
];

fn c5() -> Outcome {
    let mut o = Outcome::new();
    let rows = bounds_table(9).unwrap();
    let mut checked = 0;
    for (name, printed) in PRINTED {
        for (row, want) in rows.iter().zip(printed) {
            let got = match name {
                "classical" => Some(row.classical.clone()),
                "derksen" => Some(row.derksen.clone()),
                "gurvits" => Some(row.gurvits.clone()),
                "cglv" => row.cglv.clone(),
                "new" => Some(row.new.clone()),
                _ => Some(row.lower.clone()),
            };
            let ok = got == want.map(Into::into);
            if !ok {
                o.check(false, format!("{name} d={}: got {got:?}, printed {want:?}", row.d));
            }
            checked += 1;
        }
    }
    o.check(checked == 48, format!("{checked} cells match"));
    o.check(rows[1].lower == 17.into(), "d=3 lower bound 17");
    let terms_ok = (2..=9).all(|d| Scheme::Main.term_count(d) == rows[d - 2].new);
    o.check(terms_ok, "main term counts equal the new bound");
    o
}

fn c6() -> Outcome {
    let mut o = Outcome::new();
    for d in 2..=5 {
        let r = separation_matrix(d).unwrap().check();
        o.check(r.holds(), format!("separation d={d} ({}x{})", r.size, r.size));
    }
    for d in 2..=4 {
        let t = Instant::now();
        let r = rank_oracle(d, false).unwrap();
        let el = t.elapsed();
        let expected = d * (1..=d).product::<usize>();
        o.check(
            r.rank == expected && el <= Duration::from_secs(60),
            format!("rank d={d} = {} (expected {expected}) in {}", r.rank, secs(el)),
        );
    }
    o
}

fn c7() -> Outcome {
    let mut o = Outcome::new();
    for (d, printed) in [(2, 8), (3, 162), (4, 1536)] {
        let e = enumerate_symmetries(d, true).unwrap();
        o.check(e.h_order == printed, format!("|H| d={d} = {}", e.h_order));
        o.check(e.faithful == Some(true), format!("faithful d={d}"));
        let dec = Scheme::Main.build(d).unwrap();
        let a = action_summary(&dec, &e.elements, false).unwrap();
        o.check(
            a.holds() && a.preserving == a.checked,
            format!("d={d}: {}/{} elements of H preserve signs", a.preserving, a.checked),
        );
    }
    for d in 2..=5 {
        let e = enumerate_symmetries(d, false).unwrap();
        o.check(e.half_split(), format!("half split d={d}: {}/{}", e.h_order, e.tilde_order));
    }
    for d in [5, 6] {
        let e = enumerate_symmetries(d, false).unwrap();
        let flag = if e.matches_table() == Some(false) { " [mismatch flagged]" } else { "" };
        o.check(
            e.matches_formula(),
            format!(
                "d={d}: enumerated {} / printed {} / formula {}{flag}",
                e.h_order,
                e.table.unwrap_or_default(),
                e.formula
            ),
        );
    }
    o
}

fn c8() -> Outcome {
    let mut o = Outcome::new();
    let affine = (2..=6).all(|d| affine_lemma_check(d).unwrap().holds);
    o.check(affine, "affine lemma d=2..6");
    let signs = (2..=12).all(|d| sign_formula_check(d).unwrap().holds);
    o.check(signs, "sign formulas d=2..12");
    o
}

fn c9() -> Outcome {
    let mut o = Outcome::new();
    for d in 2..=6 {
        let r = transpose_closure(d).unwrap();
        o.check(r.closed == (d <= 3), format!("d={d} closed={}", r.closed));
    }
    let w = transpose_closure(4).unwrap().witness;
    let expected = MonoMatrix::new(4, 0, 1, Perm::transposition(4, 1, 2).unwrap());
    o.check(
        w.as_ref() == Some(&expected),
        format!("d=4 witness {} (transpose P_(1 2) D)", w.map_or("none".into(), |w| w.to_string())),
    );
    o
}

fn c10() -> Outcome {
    let mut o = Outcome::new();
    for d in 2..=6 {
        let fams = vanish_on_points(d).unwrap();
        o.check(fams.iter().all(|(_, r)| r.all_vanish()), format!("quadrics d={d}"));
    }
    for d in [3, 4] {
        let points = variety_points(d);
        for fam in extra_generators(d).unwrap() {
            let r = vanish_check(&fam.generators, &points);
            o.check(
                r.all_vanish(),
                format!("d={d} {}: {}/{} vanish", fam.name, r.generators - r.failing.len(), r.generators),
            );
        }
    }
    for (d, p, mode) in [(2, 5, LocusMode::Full), (3, 7, LocusMode::Full), (4, 5, LocusMode::Staged)] {
        let t = Instant::now();
        let r = finite_field_locus_count(d, p, mode).unwrap();
        let el = t.elapsed();
        o.check(
            r.holds() && el <= Duration::from_secs(120),
            format!("GF({p}) d={d} {}: {} points in {}", mode.name(), r.projective, secs(el)),
        );
    }
    let red = reduce_rho_quadrics_d3().unwrap();
    o.check(red.iter().all(|r| r.integral && r.residual_in_ideal), "d=3 rho reduction");
    o
}

fn run_bin(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_det-waring")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn c11() -> Outcome {
    let mut o = Outcome::new();
    let ranges = [
        (Scheme::Main, 1..=6),
        (Scheme::Classical, 1..=5),
        (Scheme::Gurvits, 1..=5),
        (Scheme::Monomial, 1..=6),
    ];
    let mut pairs = 0;
    for (scheme, range) in ranges {
        for d in range {
            let dec = scheme.build(d).unwrap();
            let base = verify_power_decomposition(&dec, &opts(VerifyMode::Expansion, Exec::Sequential));
            for (mode, exec) in [
                (VerifyMode::Expansion, Exec::Parallel),
                (VerifyMode::Streaming, Exec::Sequential),
                (VerifyMode::Streaming, Exec::Parallel),
            ] {
                let r = verify_power_decomposition(&dec, &opts(mode, exec));
                pairs += 1;
                if !r.same_outcome(&base) {
                    o.check(false, format!("{scheme} d={d} {} {exec:?}", mode.name()));
                }
            }
        }
    }
    o.check(true, format!("{pairs} mode/exec pairs agree"));
    let invocations: [&[&str]; 5] = [
        &["verify", "--d", "4", "--mode", "both"],
        &["lemma-check", "--d", "4", "--seed", "7"],
        &["symmetries", "--d", "6", "--full", "--force", "--seed", "3"],
        &["equations", "--d", "3", "--prime", "7"],
        &["independence", "--d", "4"],
    ];
    for args in invocations {
        let seq = run_bin(&[args, &["--jobs", "1"]].concat());
        let par = run_bin(&[args, &["--jobs", "4"]].concat());
        let again = run_bin(&[args, &["--jobs", "4"]].concat());
        o.check(
            seq == par && par == again && !seq.1.is_empty(),
            format!("{} reports byte-identical", args.join(" ")),
        );
    }
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("main identity d=2..6", c1),
        ("classical and Gurvits identities d=2..5", c2),
        ("monomial identity d=2..6 and 5-term product", c3),
        ("lemma oracle equivalence d=2..5", c4),
        ("bounds table d=2..9", c5),
        ("linear independence", c6),
        ("symmetry groups and action", c7),
        ("affine lemma and sign formulas", c8),
        ("transpose closure", c9),
        ("defining equations", c10),
        ("differential testing", c11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name} [{}] ({})",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.notes.join("; "),
            secs(t.elapsed())
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
