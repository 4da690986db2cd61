//! Exact verification of the decompositions.
//!
//! Two independent routes check `scale * target == sum of terms`:
//!
//! * **expansion** expands every term with the multinomial theorem into one
//!   shared coefficient map and compares the result with the target;
//! * **streaming** never materializes the sum. Terms are grouped by the
//!   support of their linear form; each monomial is visited exactly once, by
//!   the first group whose support contains the monomial's support, and its
//!   coefficient is computed directly as a sum over all groups containing
//!   that support.
//!
//! The module also carries the closed-form coefficient formulas used in the
//! proof of the main identity, each checked against brute-force expansion.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;
use smallvec::SmallVec;
use thiserror::Error;

use crate::cyclotomic::{Cyc, CycError, CycField};
use crate::decompositions::{Perm, PowerDecomposition, ProductDecomposition, Scheme};
use crate::multipoly::{
    determinant_poly_in, expand_power, expand_power_into, multinomial, LinForm, Monomial, PowerTable, SparsePoly,
    TermMap, VarId,
};
use crate::Exec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("multi-index {0:?} must have {1} entries in 1..={1}")]
    BadMultiIndex(Vec<usize>, usize),
    #[error("index tuples have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("d = {0} is out of range")]
    OutOfRange(usize),
    #[error(transparent)]
    Field(#[from] CycError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerifyMode {
    Expansion,
    Streaming,
}

impl VerifyMode {
    pub fn name(self) -> &'static str {
        match self {
            VerifyMode::Expansion => "expansion",
            VerifyMode::Streaming => "streaming",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    pub exec: Exec,
    /// Collect every mismatch instead of only the smallest one.
    pub exhaustive: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            mode: VerifyMode::Expansion,
            exec: Exec::Parallel,
            exhaustive: false,
        }
    }
}

/// A monomial whose coefficient in the term sum differs from the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub monomial: Monomial,
    pub expected: Cyc,
    pub actual: Cyc,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub scheme: Scheme,
    pub d: usize,
    pub mode: VerifyMode,
    pub equal: bool,
    pub term_count: usize,
    /// Distinct monomials produced by any term before cancellation.
    pub distinct_monomials: usize,
    /// Monomials with a nonzero coefficient in the sum.
    pub surviving_monomials: usize,
    pub elapsed: Duration,
    /// The smallest mismatched monomial in canonical order.
    pub witness: Option<Mismatch>,
    /// All mismatches, sorted; only filled in exhaustive mode.
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    /// Compares everything except timing.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.equal == other.equal
            && self.term_count == other.term_count
            && self.distinct_monomials == other.distinct_monomials
            && self.surviving_monomials == other.surviving_monomials
            && self.witness == other.witness
    }
}

/// Checks `dec.scale * target == sum of terms` exactly.
pub fn verify_power_decomposition(dec: &PowerDecomposition, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let target = dec.scaled_target();
    let outcome = match opts.mode {
        VerifyMode::Expansion => verify_by_expansion(dec, &target, opts.exec),
        VerifyMode::Streaming => verify_by_streaming(dec, &target, opts.exec),
    };
    let Outcome {
        distinct,
        surviving,
        mut mismatches,
    } = outcome;
    mismatches.sort_by(|a, b| a.monomial.cmp(&b.monomial));
    let witness = mismatches.first().cloned();
    if !opts.exhaustive {
        mismatches.clear();
    }
    VerificationReport {
        scheme: dec.scheme,
        d: dec.d,
        mode: opts.mode,
        equal: witness.is_none(),
        term_count: dec.terms.len(),
        distinct_monomials: distinct,
        surviving_monomials: surviving,
        elapsed: start.elapsed(),
        witness,
        mismatches,
    }
}

struct Outcome {
    distinct: usize,
    surviving: usize,
    mismatches: Vec<Mismatch>,
}

fn merge_maps(mut a: TermMap, mut b: TermMap) -> TermMap {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    for (m, c) in b {
        match a.get_mut(&m) {
            Some(existing) => *existing += &c,
            None => {
                a.insert(m, c);
            }
        }
    }
    a
}

/// The raw (uncancelled) sum of all terms.
pub fn expand_terms(dec: &PowerDecomposition, exec: Exec) -> TermMap {
    match exec {
        Exec::Sequential => {
            let mut acc = HashMap::new();
            for t in &dec.terms {
                expand_power_into(&t.form, t.exponent, &t.coeff, &mut acc);
            }
            acc
        }
        Exec::Parallel => dec
            .terms
            .par_iter()
            .fold(HashMap::new, |mut acc, t| {
                expand_power_into(&t.form, t.exponent, &t.coeff, &mut acc);
                acc
            })
            .reduce(HashMap::new, merge_maps),
    }
}

fn verify_by_expansion(dec: &PowerDecomposition, target: &SparsePoly, exec: Exec) -> Outcome {
    let sum = expand_terms(dec, exec);
    let field = dec.field();
    let mut mismatches = Vec::new();
    let mut surviving = 0;
    for (m, c) in &sum {
        if !c.is_zero() {
            surviving += 1;
        }
        let expected = target.coefficient(m);
        if *c != expected {
            mismatches.push(Mismatch {
                monomial: m.clone(),
                expected,
                actual: c.clone(),
            });
        }
    }
    for (m, c) in target.terms() {
        if !sum.contains_key(m) {
            mismatches.push(Mismatch {
                monomial: m.clone(),
                expected: c.clone(),
                actual: Cyc::zero(&field),
            });
        }
    }
    Outcome {
        distinct: sum.len(),
        surviving,
        mismatches,
    }
}

struct SupportGroup {
    support: Vec<VarId>,
    terms: Vec<usize>,
}

struct StreamIndex<'a> {
    dec: &'a PowerDecomposition,
    groups: Vec<SupportGroup>,
    by_var: HashMap<VarId, Vec<usize>>,
    tables: Vec<PowerTable>,
}

impl<'a> StreamIndex<'a> {
    fn new(dec: &'a PowerDecomposition) -> Self {
        let mut groups: Vec<SupportGroup> = Vec::new();
        let mut lookup: HashMap<Vec<VarId>, usize> = HashMap::new();
        for (t, term) in dec.terms.iter().enumerate() {
            let support: Vec<VarId> = term.form.support().into_iter().map(|(v, _)| v).collect();
            let g = *lookup.entry(support.clone()).or_insert_with(|| {
                groups.push(SupportGroup {
                    support,
                    terms: Vec::new(),
                });
                groups.len() - 1
            });
            groups[g].terms.push(t);
        }
        let mut by_var: HashMap<VarId, Vec<usize>> = HashMap::new();
        for (g, group) in groups.iter().enumerate() {
            for &v in &group.support {
                by_var.entry(v).or_default().push(g);
            }
        }
        let tables = dec.terms.iter().map(|t| PowerTable::new(&t.form, t.exponent)).collect();
        Self {
            dec,
            groups,
            by_var,
            tables,
        }
    }

    /// Groups (ascending) whose support contains every variable of `vars`.
    fn containing(&self, vars: &[VarId]) -> Vec<usize> {
        let mut lists: Vec<&Vec<usize>> = Vec::with_capacity(vars.len());
        for v in vars {
            match self.by_var.get(v) {
                Some(l) => lists.push(l),
                None => return Vec::new(),
            }
        }
        lists.sort_by_key(|l| l.len());
        let Some((first, rest)) = lists.split_first() else {
            return (0..self.groups.len()).collect();
        };
        first
            .iter()
            .copied()
            .filter(|g| rest.iter().all(|l| l.binary_search(g).is_ok()))
            .collect()
    }

    /// Coefficient of `x^lambda` (over the variables `vars`) in the full sum.
    fn coefficient(&self, containing: &[usize], vars: &[VarId], lambda: &[u32], degree: u32) -> Cyc {
        let field = self.dec.terms[0].coeff.field();
        let mut acc = Cyc::zero(field);
        for &g in containing {
            let group = &self.groups[g];
            let positions: SmallVec<[usize; 8]> = vars
                .iter()
                .map(|v| group.support.binary_search(v).expect("group contains support"))
                .collect();
            for &t in &group.terms {
                let term = &self.dec.terms[t];
                if term.exponent != degree {
                    continue;
                }
                let table = &self.tables[t];
                let mut prod = term.coeff.clone();
                for (&p, &l) in positions.iter().zip(lambda) {
                    prod = &prod * &table.powers[p][l as usize];
                }
                acc += &prod;
            }
        }
        let mult = multinomial(degree, lambda).expect("composition of degree");
        acc.scale(&BigInt::from(mult))
    }
}

/// Calls `f` on every subset of `items` with between 1 and `max` elements.
fn for_each_subset<T: Copy>(items: &[T], max: usize, f: &mut impl FnMut(&[T])) {
    fn rec<T: Copy>(items: &[T], start: usize, max: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        for k in start..items.len() {
            cur.push(items[k]);
            f(cur);
            if cur.len() < max {
                rec(items, k + 1, max, cur, f);
            }
            cur.pop();
        }
    }
    if max > 0 {
        rec(items, 0, max, &mut Vec::new(), f);
    }
}

/// Calls `f` on every composition of `total` into `parts` positive parts.
pub(crate) fn for_each_composition(total: u32, parts: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(remaining: u32, left: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if left == 1 {
            cur.push(remaining);
            f(cur);
            cur.pop();
            return;
        }
        for first in 1..=remaining.saturating_sub(left as u32 - 1) {
            cur.push(first);
            rec(remaining - first, left - 1, cur, f);
            cur.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    if total < parts as u32 {
        return;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), f);
}

fn stream_group(index: &StreamIndex<'_>, g: usize, target: &SparsePoly) -> Outcome {
    let group = &index.groups[g];
    let mut degrees: Vec<u32> = group.terms.iter().map(|&t| index.dec.terms[t].exponent).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = Outcome {
        distinct: 0,
        surviving: 0,
        mismatches: Vec::new(),
    };
    for &degree in &degrees {
        for_each_subset(&group.support, degree as usize, &mut |vars: &[VarId]| {
            let containing = index.containing(vars);
            if containing.first() != Some(&g) {
                return;
            }
            for_each_composition(degree, vars.len(), &mut |lambda: &[u32]| {
                let m = Monomial::from_sorted(vars.iter().copied().zip(lambda.iter().copied()).collect());
                let actual = index.coefficient(&containing, vars, lambda, degree);
                out.distinct += 1;
                if !actual.is_zero() {
                    out.surviving += 1;
                }
                let expected = target.coefficient(&m);
                if actual != expected {
                    out.mismatches.push(Mismatch {
                        monomial: m,
                        expected,
                        actual,
                    });
                }
            });
        });
    }
    out
}

fn verify_by_streaming(dec: &PowerDecomposition, target: &SparsePoly, exec: Exec) -> Outcome {
    let index = StreamIndex::new(dec);
    let combine = |mut a: Outcome, b: Outcome| {
        a.distinct += b.distinct;
        a.surviving += b.surviving;
        a.mismatches.extend(b.mismatches);
        a
    };
    let empty = || Outcome {
        distinct: 0,
        surviving: 0,
        mismatches: Vec::new(),
    };
    let mut out = match exec {
        Exec::Sequential => (0..index.groups.len())
            .map(|g| stream_group(&index, g, target))
            .fold(empty(), combine),
        Exec::Parallel => (0..index.groups.len())
            .into_par_iter()
            .map(|g| stream_group(&index, g, target))
            .reduce(empty, combine),
    };
    // Target monomials that no term can produce.
    let field = dec.field();
    for (m, c) in target.terms() {
        let vars: Vec<VarId> = m.support().collect();
        if index.containing(&vars).is_empty() || dec.terms.iter().all(|t| t.exponent != m.degree()) {
            out.mismatches.push(Mismatch {
                monomial: m.clone(),
                expected: c.clone(),
                actual: Cyc::zero(&field),
            });
        }
    }
    out
}

/// A sorted multiset `i_1 <= ... <= i_d` of indices in `1..=d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<usize>,
}

impl MultiIndex {
    pub fn new(mut entries: Vec<usize>, d: usize) -> Result<Self, VerifyError> {
        if entries.len() != d || entries.iter().any(|&i| i == 0 || i > d) {
            return Err(VerifyError::BadMultiIndex(entries, d));
        }
        entries.sort_unstable();
        Ok(Self { entries })
    }

    /// From a multiplicity tuple `lambda` with `sum(lambda) = d`.
    pub fn from_multiplicities(lambda: &[u32]) -> Result<Self, VerifyError> {
        let d = lambda.len();
        let entries: Vec<usize> = lambda
            .iter()
            .enumerate()
            .flat_map(|(k, &l)| std::iter::repeat_n(k + 1, l as usize))
            .collect();
        Self::new(entries, d)
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn d(&self) -> usize {
        self.entries.len()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        let mut lambda = vec![0u32; self.d()];
        for &i in &self.entries {
            lambda[i - 1] += 1;
        }
        lambda
    }

    pub fn support_size(&self) -> usize {
        let mut s = self.entries.clone();
        s.dedup();
        s.len()
    }

    /// `x_{i_1} ... x_{i_d}` with `x_k` placed on the diagonal variable `x_{k,k}`.
    pub fn diagonal_monomial(&self) -> Monomial {
        Monomial::from_factors(self.entries.iter().map(|&i| (VarId::new(i, i), 1)))
    }
}

fn binom2(d: usize) -> i64 {
    (d as i64 + 1) * d as i64 / 2
}

/// Closed form of `[x_I] sum_j (-1)^{(d+1)j} (sum_i w^{ij} x_i)^d`:
/// `multinomial(d, lambda) * d` when `sum(I) = C(d+1, 2) (mod d)`, else 0.
pub fn lemma_coefficient(index: &MultiIndex, d: usize) -> Result<Cyc, VerifyError> {
    if index.d() != d {
        return Err(VerifyError::BadMultiIndex(index.entries.clone(), d));
    }
    let field = CycField::new(d as u32)?;
    let sum: i64 = index.entries.iter().map(|&i| i as i64).sum();
    if (sum - binom2(d)).rem_euclid(d as i64) != 0 {
        return Ok(Cyc::zero(&field));
    }
    let m = multinomial(d as u32, &index.multiplicities()).expect("multiplicities sum to d");
    Ok(Cyc::from_bigint(&field, BigInt::from(m) * d))
}

/// `sum_j (-1)^{(d+1)j} (sum_i w^{ij} x_{i,i})^d`, expanded.
pub fn lemma_polynomial(d: usize) -> Result<SparsePoly, VerifyError> {
    let field = CycField::new(d as u32)?;
    let mut acc = HashMap::new();
    for j in 1..=d as i64 {
        let sign = if (d as i64 + 1) * j % 2 == 0 { 1 } else { -1 };
        let form = LinForm::from_entries(&field, d, (1..=d).map(|i| (VarId::new(i, i), Cyc::root(&field, i as i64 * j))));
        expand_power_into(&form, d as u32, &Cyc::from_int(&field, sign), &mut acc);
    }
    Ok(SparsePoly::from_accumulator(&field, acc))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub d: usize,
    pub holds: bool,
    pub monomials_checked: usize,
    pub nonzero: usize,
    pub first_failure: Option<MultiIndex>,
}

/// Compares the expanded lemma polynomial against [`lemma_coefficient`] on
/// every degree-`d` monomial in `d` variables.
pub fn verify_lemma(d: usize) -> Result<LemmaReport, VerifyError> {
    if !(1..=8).contains(&d) {
        return Err(VerifyError::OutOfRange(d));
    }
    let p = lemma_polynomial(d)?;
    let mut report = LemmaReport {
        d,
        holds: true,
        monomials_checked: 0,
        nonzero: 0,
        first_failure: None,
    };
    let mut err = None;
    for_each_weak_composition(d as u32, d, &mut |lambda: &[u32]| {
        if err.is_some() {
            return;
        }
        let index = MultiIndex::from_multiplicities(lambda).expect("valid composition");
        let expected = match lemma_coefficient(&index, d) {
            Ok(c) => c,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        let actual = p.coefficient(&index.diagonal_monomial());
        report.monomials_checked += 1;
        if !actual.is_zero() {
            report.nonzero += 1;
        }
        if actual != expected && report.holds {
            report.holds = false;
            report.first_failure = Some(index);
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(report)
}

/// Calls `f` on every weak composition of `total` into `parts` parts, in
/// lexicographic order.
pub fn for_each_weak_composition(total: u32, parts: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(remaining: u32, left: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if left == 1 {
            cur.push(remaining);
            f(cur);
            cur.pop();
            return;
        }
        for first in 0..=remaining {
            cur.push(first);
            rec(remaining - first, left - 1, cur, f);
            cur.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), f);
}

/// A pair of index tuples naming `x_{I,J} = x_{i_1,j_1} ... x_{i_d,j_d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IJPair {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl IJPair {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self, VerifyError> {
        if rows.len() != cols.len() {
            return Err(VerifyError::LengthMismatch(rows.len(), cols.len()));
        }
        let d = rows.len();
        if rows.iter().chain(&cols).any(|&i| i == 0 || i > d) {
            return Err(VerifyError::BadMultiIndex(rows, d));
        }
        Ok(Self { rows, cols })
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::from_index_pair(&self.rows, &self.cols)
    }

    fn full_support(v: &[usize]) -> bool {
        let mut seen = vec![false; v.len() + 1];
        v.iter().for_each(|&i| seen[i] = true);
        seen[1..].iter().all(|&s| s)
    }

    /// `sigma_{I,J}` with `sigma(i_k) = j_k`, when both supports are `[d]`.
    pub fn pairing(&self) -> Option<Perm> {
        if !Self::full_support(&self.rows) || !Self::full_support(&self.cols) {
            return None;
        }
        let mut images = vec![0usize; self.d()];
        for (&i, &j) in self.rows.iter().zip(&self.cols) {
            images[i - 1] = j;
        }
        Perm::from_images(&images).ok()
    }
}

/// `[x_{I,J}] det_d`: the sign of `sigma_{I,J}` when both supports are
/// full, zero otherwise.
pub fn det_coefficient(pair: &IJPair) -> Result<Cyc, VerifyError> {
    let field = CycField::new(pair.d() as u32)?;
    Ok(match pair.pairing() {
        Some(sigma) => Cyc::from_int(&field, sigma.sign() as i64),
        None => Cyc::zero(&field),
    })
}

/// `[x_{I,J}] R` for the right-hand side `R` of the main identity, via the
/// case analysis of its proof: with `H` the permutations mapping every
/// `i_k` to `j_k`, the coefficient is `multinomial(d, lambda) * d *
/// sum_{sigma in H} (-1)^sigma` when `sum(I) = C(d+1, 2) (mod d)`, else 0.
pub fn theorem_coefficient(pair: &IJPair) -> Result<Cyc, VerifyError> {
    let d = pair.d();
    let field = CycField::new(d as u32)?;
    let index = MultiIndex::new(pair.rows.clone(), d)?;
    let lemma = lemma_coefficient(&index, d)?;
    if lemma.is_zero() {
        return Ok(lemma);
    }
    let signed: i64 = Perm::all(d)
        .into_iter()
        .filter(|sigma| pair.rows.iter().zip(&pair.cols).all(|(&i, &j)| sigma.apply(i) == j))
        .map(|sigma| sigma.sign() as i64)
        .sum();
    Ok(&lemma * &Cyc::from_int(&field, signed))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductReport {
    pub equal: bool,
    /// Sum over the products of their individual monomial counts.
    pub expanded_terms: usize,
    pub final_monomials: usize,
}

/// Expands the signed products and compares with `det_d`.
pub fn verify_product_identity(pd: &ProductDecomposition) -> ProductReport {
    let field = pd
        .terms
        .first()
        .and_then(|t| t.factors.first())
        .map(|f| f.field().clone())
        .unwrap_or_else(|| CycField::new(pd.d as u32).expect("d >= 1"));
    let mut sum = SparsePoly::zero(&field);
    let mut expanded_terms = 0;
    for term in &pd.terms {
        let mut prod = SparsePoly::constant(Cyc::from_int(&field, term.sign as i64));
        for factor in &term.factors {
            prod = prod.mul(&expand_power(factor, 1));
        }
        expanded_terms += prod.len();
        sum = sum.add(&prod);
    }
    let det = determinant_poly_in(&field, pd.d);
    ProductReport {
        equal: sum == det,
        expanded_terms,
        final_monomials: sum.len(),
    }
}
