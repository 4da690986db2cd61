//! Quadrics cutting out the projective points `[D^j P_sigma]`, the extra
//! generators for `d = 3, 4`, and brute-force point counts over `GF(p)`.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::cyclotomic::{is_prime, Cyc, CycError, CycField, PrimeScalar};
use crate::independence::{term_indices, term_point, TermPoint};
use crate::linalg::solve_dense;
use crate::multipoly::{permanent_poly, Monomial, SparsePoly, VarId};
use crate::perm::Perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VarietyError {
    #[error("d = {0} is out of range")]
    OutOfRange(usize),
    #[error("extra generators are only known for d = 3 and d = 4, got {0}")]
    NoExtraGenerators(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("d = {d} does not divide p - 1 = {}", p - 1)]
    NoRootOfUnity { d: usize, p: u64 },
    #[error("full enumeration needs p^(d^2) <= 10^8; use staged mode")]
    TooLarge,
    #[error(transparent)]
    Field(#[from] CycError),
}

fn field(d: usize) -> Result<Arc<CycField>, VarietyError> {
    Ok(CycField::new(d as u32)?)
}

fn var(i: usize, j: usize) -> Monomial {
    Monomial::var(VarId::new(i, j))
}

/// `i` reduced into `[1, d]`.
fn wrap(i: i64, d: usize) -> usize {
    let r = i.rem_euclid(d as i64) as usize;
    if r == 0 {
        d
    } else {
        r
    }
}

/// The row-sum `rho_i`.
pub fn rho(f: &Arc<CycField>, d: usize, i: usize) -> SparsePoly {
    SparsePoly::from_terms(f, (1..=d).map(|j| (var(i, j), Cyc::one(f))))
}

/// The three generator families of the theorem, in fixed order.
#[derive(Clone, Debug)]
pub struct QuadricSet {
    pub d: usize,
    /// `x_{i,j1} x_{i,j2}`, `i` ascending then `j1 < j2`.
    pub row: Vec<SparsePoly>,
    /// `x_{i1,j} x_{i2,j}`, `j` ascending then `i1 < i2`.
    pub col: Vec<SparsePoly>,
    /// `rho_i^2 - rho_{i-1} rho_{i+1}`, indices mod `d`.
    pub rho: Vec<SparsePoly>,
}

impl QuadricSet {
    pub fn all(&self) -> impl Iterator<Item = &SparsePoly> {
        self.row.iter().chain(&self.col).chain(&self.rho)
    }

    pub fn len(&self) -> usize {
        self.row.len() + self.col.len() + self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(family name, generators)` pairs.
    pub fn families(&self) -> [(&'static str, &[SparsePoly]); 3] {
        [("row", &self.row), ("column", &self.col), ("rho", &self.rho)]
    }
}

pub fn quadric_generators(d: usize) -> Result<QuadricSet, VarietyError> {
    if !(2..=8).contains(&d) {
        return Err(VarietyError::OutOfRange(d));
    }
    let f = field(d)?;
    let one = Cyc::one(&f);
    let mut row = Vec::new();
    let mut col = Vec::new();
    for a in 1..=d {
        for b1 in 1..=d {
            for b2 in b1 + 1..=d {
                row.push(SparsePoly::from_terms(&f, [(var(a, b1).mul(&var(a, b2)), one.clone())]));
            }
        }
    }
    for a in 1..=d {
        for b1 in 1..=d {
            for b2 in b1 + 1..=d {
                col.push(SparsePoly::from_terms(&f, [(var(b1, a).mul(&var(b2, a)), one.clone())]));
            }
        }
    }
    let rho_polys: Vec<SparsePoly> = (1..=d).map(|i| rho(&f, d, i)).collect();
    let r = |i: i64| &rho_polys[wrap(i, d) - 1];
    let rho = (1..=d as i64).map(|i| r(i).mul(r(i)).sub(&r(i - 1).mul(r(i + 1)))).collect();
    Ok(QuadricSet { d, row, col, rho })
}

/// The `d d!` points `D^j P_sigma`.
pub fn variety_points(d: usize) -> Vec<TermPoint> {
    term_indices(d)
        .into_iter()
        .map(|(s, j)| term_point(d, &s, j).expect("valid index"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishReport {
    pub generators: usize,
    pub points: usize,
    /// Generators that are nonzero at some point.
    pub failing: Vec<usize>,
}

impl VanishReport {
    pub fn all_vanish(&self) -> bool {
        self.failing.is_empty()
    }
}

pub fn vanish_check(polys: &[SparsePoly], points: &[TermPoint]) -> VanishReport {
    let failing = polys
        .par_iter()
        .enumerate()
        .filter(|(_, g)| points.iter().any(|p| !g.eval_matrix(&p.coords, p.d).is_zero()))
        .map(|(k, _)| k)
        .collect();
    VanishReport {
        generators: polys.len(),
        points: points.len(),
        failing,
    }
}

/// Per-family vanishing of the theorem's quadrics on all `d d!` points.
pub fn vanish_on_points(d: usize) -> Result<Vec<(&'static str, VanishReport)>, VarietyError> {
    if !(2..=6).contains(&d) {
        return Err(VarietyError::OutOfRange(d));
    }
    let q = quadric_generators(d)?;
    let points = variety_points(d);
    Ok(q.families().map(|(name, g)| (name, vanish_check(g, &points))).to_vec())
}

#[derive(Clone, Debug)]
pub struct GeneratorFamily {
    pub name: &'static str,
    pub generators: Vec<SparsePoly>,
    /// Index tuples enumerated before deduplication.
    pub raw_count: usize,
    /// Distinct polynomials before identifying `g` with `-g`.
    pub distinct_count: usize,
}

fn complement(d: usize, used: &[usize]) -> Vec<usize> {
    (1..=d).filter(|i| !used.contains(i)).collect()
}

/// Sign-normalized form: the smallest monomial gets a positive coefficient.
fn normalize_sign(p: SparsePoly) -> SparsePoly {
    let negative = p
        .sorted_terms()
        .first()
        .and_then(|(_, c)| c.to_rational())
        .is_some_and(|q| q < num_rational::BigRational::from_integer(0.into()));
    if negative {
        p.neg()
    } else {
        p
    }
}

/// Extra generators for `d = 3` (one family) and `d = 4` (two families).
pub fn extra_generators(d: usize) -> Result<Vec<GeneratorFamily>, VarietyError> {
    let f = field(d)?;
    let sq = |i: usize, j: usize| SparsePoly::from_terms(&f, [(var(i, j).mul(&var(i, j)), Cyc::one(&f))]);
    let perm = |rows: &[usize], cols: &[usize]| permanent_poly(&f, rows, cols).expect("2 x 2 permanent");
    match d {
        3 => {
            let mut gens = Vec::new();
            for i in 1..=3 {
                for j in 1..=3 {
                    gens.push(sq(i, j).sub(&perm(&complement(3, &[i]), &complement(3, &[j]))));
                }
            }
            Ok(vec![GeneratorFamily {
                name: "square-minus-permanent",
                raw_count: gens.len(),
                distinct_count: gens.len(),
                generators: gens,
            }])
        }
        4 => {
            let mut first = Vec::new();
            for i in 1..=4 {
                for j1 in 1..=4 {
                    for j2 in j1 + 1..=4 {
                        let rows = [wrap(i as i64 - 1, 4), wrap(i as i64 + 1, 4)];
                        let p = perm(&rows, &complement(4, &[j1, j2]));
                        first.push(sq(i, j1).add(&sq(i, j2)).sub(&p));
                    }
                }
            }
            let mut raw = 0;
            let mut distinct: BTreeMap<String, SparsePoly> = BTreeMap::new();
            let mut up_to_sign: BTreeMap<String, SparsePoly> = BTreeMap::new();
            let perms = Perm::all(4);
            for ip in &perms {
                let i = ip.images();
                if (i[0] + i[1]) % 4 != (i[2] + i[3]) % 4 {
                    continue;
                }
                for jp in &perms {
                    let j = jp.images();
                    raw += 1;
                    // P_{I;J} is the permanent complementary to rows I and columns J.
                    let g = perm(&[i[2], i[3]], &[j[2], j[3]]).sub(&perm(&[i[0], i[1]], &[j[0], j[1]]));
                    distinct.entry(g.to_string()).or_insert_with(|| g.clone());
                    let n = normalize_sign(g);
                    up_to_sign.entry(n.to_string()).or_insert(n);
                }
            }
            Ok(vec![
                GeneratorFamily {
                    name: "two-squares-minus-permanent",
                    raw_count: first.len(),
                    distinct_count: first.len(),
                    generators: first,
                },
                GeneratorFamily {
                    name: "permanent-difference",
                    raw_count: raw,
                    distinct_count: distinct.len(),
                    generators: up_to_sign.into_values().collect(),
                },
            ])
        }
        _ => Err(VarietyError::NoExtraGenerators(d)),
    }
}

/// Whether a monomial is divisible by some `x_a x_b` with `a != b` in a
/// common row or column.
pub fn in_monomial_ideal(m: &Monomial) -> bool {
    let vars: Vec<VarId> = m.support().collect();
    vars.iter()
        .enumerate()
        .any(|(k, a)| vars[k + 1..].iter().any(|b| a.row == b.row || a.col == b.col))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub i: usize,
    /// Coefficient of each extra generator, in generator order.
    pub coefficients: Vec<Cyc>,
    pub integral: bool,
    pub residual_in_ideal: bool,
}

/// For each `i`, finds `c` with `rho_i^2 - rho_{i-1} rho_{i+1} - sum_g c_g g`
/// supported on the monomial ideal, by an exact solve restricted to the
/// monomials outside that ideal.
pub fn reduce_rho_quadrics_d3() -> Result<Vec<RowReduction>, VarietyError> {
    let d = 3;
    let f = field(d)?;
    let gens = extra_generators(d)?.remove(0).generators;
    let q = quadric_generators(d)?;
    let outside = |p: &SparsePoly| -> Vec<Monomial> {
        p.terms().keys().filter(|m| !in_monomial_ideal(m)).cloned().collect()
    };
    let mut out = Vec::new();
    for (k, target) in q.rho.iter().enumerate() {
        let mut monomials: Vec<Monomial> = outside(target);
        gens.iter().for_each(|g| monomials.extend(outside(g)));
        monomials.sort();
        monomials.dedup();
        let a: Vec<Vec<Cyc>> = monomials
            .iter()
            .map(|m| gens.iter().map(|g| g.coefficient(m)).collect())
            .collect();
        let b: Vec<Cyc> = monomials.iter().map(|m| target.coefficient(m)).collect();
        let Some(c) = solve_dense(&f, &a, &b) else {
            out.push(RowReduction {
                i: k + 1,
                coefficients: Vec::new(),
                integral: false,
                residual_in_ideal: false,
            });
            continue;
        };
        let mut residual = target.clone();
        for (g, ck) in gens.iter().zip(&c) {
            residual = residual.sub(&g.scale(ck));
        }
        out.push(RowReduction {
            i: k + 1,
            integral: c.iter().all(|x| x.to_rational().is_some_and(|q| q.is_integer())),
            residual_in_ideal: residual.terms().keys().all(in_monomial_ideal),
            coefficients: c,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocusMode {
    /// Every matrix in `GF(p)^{d x d}`.
    Full,
    /// Only matrices with at most one nonzero entry per row and column.
    Staged,
}

impl LocusMode {
    pub fn name(self) -> &'static str {
        match self {
            LocusMode::Full => "full",
            LocusMode::Staged => "staged",
        }
    }
}

/// A quadric over `GF(p)` as `(coefficient, var, var)` triples with
/// row-major variable offsets.
#[derive(Clone, Debug)]
struct CompiledQuadric {
    terms: Vec<(u64, usize, usize)>,
}

impl CompiledQuadric {
    #[inline]
    fn eval(&self, x: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for &(c, a, b) in &self.terms {
            acc = (acc + c * (x[a] * x[b] % p)) % p;
        }
        acc
    }
}

/// Image of `c` under `Q(w) -> GF(p)`, `w -> omega`.
fn cyc_to_gf(c: &Cyc, p: u64, omega: u64) -> u64 {
    let modulus = BigInt::from(p);
    let m = |x: &BigInt| x.mod_floor(&modulus).to_u64().expect("residue below p");
    let mut acc = 0u64;
    let mut pw = 1u64;
    for n in c.numerators() {
        acc = (acc + m(n) * pw) % p;
        pw = pw * omega % p;
    }
    let den = PrimeScalar::new(p, m(c.denominator())).expect("p prime");
    acc * den.inv().expect("denominator coprime to p").value() % p
}

fn compile(g: &SparsePoly, d: usize, p: u64, omega: u64) -> CompiledQuadric {
    let mut terms = Vec::new();
    for (m, c) in g.sorted_terms() {
        let vars: Vec<usize> = m
            .factors()
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat_n(v.index(d), e as usize))
            .collect();
        assert_eq!(vars.len(), 2, "quadric");
        terms.push((cyc_to_gf(c, p, omega), vars[0], vars[1]));
    }
    CompiledQuadric { terms }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusReport {
    pub d: usize,
    pub p: u64,
    pub mode: LocusMode,
    pub omega: u64,
    pub candidates: u64,
    /// Nonzero matrices satisfying every generator.
    pub solutions: u64,
    /// Solutions whose first nonzero entry is 1.
    pub normalized: u64,
    pub projective: u64,
    /// `solutions = normalized * (p - 1)`.
    pub homogeneous: bool,
    /// Every solution's row sums form a geometric progression with ratio a
    /// `d`-th root of unity.
    pub geometric: bool,
    /// Every normalized solution is the image of some `D^j P_sigma`.
    pub all_known: bool,
    /// Full mode: the monomial quadrics cut out exactly the partial
    /// permutation matrices. Staged mode: every candidate satisfies them.
    pub monomial_consistent: bool,
    pub expected: u64,
}

impl LocusReport {
    pub fn holds(&self) -> bool {
        self.homogeneous && self.geometric && self.all_known && self.monomial_consistent && self.projective == self.expected
    }
}

struct LocusContext {
    d: usize,
    p: u64,
    omega: u64,
    monomial: Vec<CompiledQuadric>,
    rho: Vec<CompiledQuadric>,
    known: HashSet<Vec<u64>>,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    candidates: u64,
    monomial_ok: u64,
    solutions: u64,
    normalized: u64,
    geometric_fail: u64,
    unknown: u64,
}

impl Tally {
    fn merge(mut self, o: Self) -> Self {
        self.candidates += o.candidates;
        self.monomial_ok += o.monomial_ok;
        self.solutions += o.solutions;
        self.normalized += o.normalized;
        self.geometric_fail += o.geometric_fail;
        self.unknown += o.unknown;
        self
    }
}

fn normalize(x: &[u64], p: u64) -> Option<Vec<u64>> {
    let lead = *x.iter().find(|&&v| v != 0)?;
    let inv = PrimeScalar::new(p, lead).ok()?.inv().ok()?.value();
    Some(x.iter().map(|&v| v * inv % p).collect())
}

impl LocusContext {
    fn new(d: usize, p: u64) -> Result<Self, VarietyError> {
        let omega = PrimeScalar::primitive_root_of_unity(p, d as u32)?.value();
        let q = quadric_generators(d)?;
        let compile_all = |gs: &[SparsePoly]| gs.iter().map(|g| compile(g, d, p, omega)).collect::<Vec<_>>();
        let mut monomial = compile_all(&q.row);
        monomial.extend(compile_all(&q.col));
        let mut known = HashSet::new();
        for sigma in Perm::all(d) {
            for j in 1..=d {
                let mut x = vec![0u64; d * d];
                let mut w = 1u64;
                for i in 1..=d {
                    w = w * PrimeScalar::new(p, omega).expect("reduced").pow(j as u64).value() % p;
                    x[(i - 1) * d + sigma.apply(i) - 1] = w;
                }
                known.insert(normalize(&x, p).expect("nonzero"));
            }
        }
        Ok(Self {
            d,
            p,
            omega,
            monomial,
            rho: compile_all(&q.rho),
            known,
        })
    }

    fn geometric(&self, x: &[u64]) -> bool {
        let (d, p) = (self.d, self.p);
        let rho: Vec<u64> = (0..d).map(|i| x[i * d..(i + 1) * d].iter().sum::<u64>() % p).collect();
        if rho.contains(&0) {
            return false;
        }
        let ratio = rho[1 % d] * PrimeScalar::new(p, rho[0]).expect("reduced").inv().expect("nonzero").value() % p;
        let steps_ok = (0..d).all(|i| rho[(i + 1) % d] == rho[i] * ratio % p);
        steps_ok && PrimeScalar::new(p, ratio).expect("reduced").pow(d as u64).value() == 1
    }

    fn visit(&self, x: &[u64], t: &mut Tally) {
        t.candidates += 1;
        if self.monomial.iter().any(|g| g.eval(x, self.p) != 0) {
            return;
        }
        t.monomial_ok += 1;
        if x.iter().all(|&v| v == 0) || self.rho.iter().any(|g| g.eval(x, self.p) != 0) {
            return;
        }
        t.solutions += 1;
        if x.iter().find(|&&v| v != 0) == Some(&1) {
            t.normalized += 1;
            if !self.known.contains(x) {
                t.unknown += 1;
            }
        }
        if !self.geometric(x) {
            t.geometric_fail += 1;
        }
    }

    /// All matrices with the first two entries fixed.
    fn full_slice(&self, prefix: [u64; 2]) -> Tally {
        let n = self.d * self.d;
        let mut x = vec![0u64; n];
        x[0] = prefix[0];
        x[1] = prefix[1];
        let mut t = Tally::default();
        loop {
            self.visit(&x, &mut t);
            let mut k = n - 1;
            loop {
                if k < 2 {
                    return t;
                }
                x[k] += 1;
                if x[k] < self.p {
                    break;
                }
                x[k] = 0;
                k -= 1;
            }
        }
    }

    fn staged(&self, row: usize, used: &mut [bool], x: &mut [u64], t: &mut Tally) {
        let d = self.d;
        if row == d {
            self.visit(x, t);
            return;
        }
        self.staged(row + 1, used, x, t);
        for c in 0..d {
            if used[c] {
                continue;
            }
            used[c] = true;
            for v in 1..self.p {
                x[row * d + c] = v;
                self.staged(row + 1, used, x, t);
            }
            x[row * d + c] = 0;
            used[c] = false;
        }
    }
}

/// Number of partial permutation matrices over `GF(p)`, zero included.
pub fn partial_permutation_count(d: usize, p: u64) -> u64 {
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    (0..=d as u64)
        .map(|k| binom(d as u64, k) * (0..k).map(|i| d as u64 - i).product::<u64>() * (p - 1).pow(k as u32))
        .sum()
}

/// Counts projective `GF(p)`-points on which every quadric of the theorem
/// vanishes. The expected count is `d d!`.
pub fn finite_field_locus_count(d: usize, p: u64, mode: LocusMode) -> Result<LocusReport, VarietyError> {
    if !(2..=6).contains(&d) {
        return Err(VarietyError::OutOfRange(d));
    }
    if !is_prime(p) {
        return Err(VarietyError::NotPrime(p));
    }
    if !(p - 1).is_multiple_of(d as u64) {
        return Err(VarietyError::NoRootOfUnity { d, p });
    }
    let n = (d * d) as u32;
    if mode == LocusMode::Full && (p as f64).powi(n as i32) > 1e8 {
        return Err(VarietyError::TooLarge);
    }
    let ctx = LocusContext::new(d, p)?;
    let t = match mode {
        LocusMode::Full => {
            let prefixes: Vec<[u64; 2]> = (0..p).flat_map(|a| (0..p).map(move |b| [a, b])).collect();
            prefixes
                .par_iter()
                .map(|&pre| ctx.full_slice(pre))
                .reduce(Tally::default, Tally::merge)
        }
        LocusMode::Staged => {
            let mut t = Tally::default();
            ctx.staged(0, &mut vec![false; d], &mut vec![0; d * d], &mut t);
            t
        }
    };
    let monomial_consistent = match mode {
        LocusMode::Full => t.monomial_ok == partial_permutation_count(d, p),
        LocusMode::Staged => t.monomial_ok == t.candidates,
    };
    let fact: u64 = (1..=d as u64).product();
    Ok(LocusReport {
        d,
        p,
        mode,
        omega: ctx.omega,
        candidates: t.candidates,
        solutions: t.solutions,
        normalized: t.normalized,
        projective: t.solutions / (p - 1),
        homogeneous: t.solutions == t.normalized * (p - 1),
        geometric: t.geometric_fail == 0,
        all_known: t.unknown == 0,
        monomial_consistent,
        expected: d as u64 * fact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_counts() {
        let q3 = quadric_generators(3).unwrap();
        assert_eq!((q3.row.len(), q3.col.len(), q3.rho.len()), (9, 9, 3));
        let q2 = quadric_generators(2).unwrap();
        assert_eq!(q2.len(), 6);
        assert!(q3.all().all(|g| g.is_homogeneous(2)));
        let f = CycField::new(3).unwrap();
        let r = |i| rho(&f, 3, i);
        assert_eq!(q3.rho[1], r(2).mul(&r(2)).sub(&r(1).mul(&r(3))));
    }

    #[test]
    fn quadrics_vanish() {
        for d in 2..=4 {
            for (name, r) in vanish_on_points(d).unwrap() {
                assert!(r.all_vanish(), "d={d} {name}");
                assert_eq!(r.points, d * (1..=d).product::<usize>());
            }
        }
    }

    #[test]
    fn perturbed_point_breaks_rho() {
        let f = CycField::new(3).unwrap();
        let q = quadric_generators(3).unwrap();
        let mut coords = vec![Cyc::zero(&f); 9];
        coords[0] = Cyc::root(&f, 1);
        coords[4] = Cyc::root(&f, 1);
        coords[8] = Cyc::root(&f, 3);
        assert!(q.rho.iter().any(|g| !g.eval_matrix(&coords, 3).is_zero()));
        assert!(q.row.iter().chain(&q.col).all(|g| g.eval_matrix(&coords, 3).is_zero()));
    }

    #[test]
    fn extra_d3() {
        let fam = extra_generators(3).unwrap();
        assert_eq!(fam.len(), 1);
        let g = &fam[0].generators;
        assert_eq!(g.len(), 9);
        let f = CycField::new(3).unwrap();
        let one = Cyc::one(&f);
        let expected = SparsePoly::from_terms(
            &f,
            [
                (var(1, 1).mul(&var(1, 1)), one.clone()),
                (var(2, 2).mul(&var(3, 3)), -&one),
                (var(2, 3).mul(&var(3, 2)), -&one),
            ],
        );
        assert_eq!(g[0], expected);
        assert!(vanish_check(g, &variety_points(3)).all_vanish());
        assert!(extra_generators(5).is_err());
    }

    #[test]
    fn d3_reduction_uses_unit_row_coefficients() {
        let reductions = reduce_rho_quadrics_d3().unwrap();
        assert_eq!(reductions.len(), 3);
        let f = CycField::new(3).unwrap();
        for r in &reductions {
            assert!(r.residual_in_ideal && r.integral, "{r:?}");
            for (k, c) in r.coefficients.iter().enumerate() {
                let expected = if k / 3 + 1 == r.i { Cyc::one(&f) } else { Cyc::zero(&f) };
                assert_eq!(c, &expected, "row {} generator {k}", r.i);
            }
        }
    }

    #[test]
    fn extra_d4_counts() {
        let fam = extra_generators(4).unwrap();
        assert_eq!(fam[0].generators.len(), 24);
        assert_eq!((fam[1].raw_count, fam[1].distinct_count, fam[1].generators.len()), (384, 24, 12));
        let points = variety_points(4);
        assert!(vanish_check(&fam[1].generators, &points).all_vanish());
    }

    #[test]
    fn d4_two_squares_family_fails_as_printed() {
        // x_{i,j1}^2 + x_{i,j2}^2 is w^{2ij} whenever sigma(i) is in {j1, j2},
        // while the permanent also needs sigma(i + 2) in {j1, j2}.
        let fam = extra_generators(4).unwrap();
        let r = vanish_check(&fam[0].generators, &variety_points(4));
        assert_eq!(r.failing.len(), 24);
    }

    #[test]
    fn ideal_membership() {
        assert!(in_monomial_ideal(&var(1, 1).mul(&var(1, 2))));
        assert!(in_monomial_ideal(&var(1, 1).mul(&var(2, 1))));
        assert!(!in_monomial_ideal(&var(1, 1).mul(&var(1, 1))));
        assert!(!in_monomial_ideal(&var(1, 1).mul(&var(2, 2))));
    }

    #[test]
    fn small_locus_counts() {
        let r = finite_field_locus_count(2, 5, LocusMode::Full).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!((r.projective, r.candidates), (4, 625));
        let s = finite_field_locus_count(2, 5, LocusMode::Staged).unwrap();
        assert!(s.holds() && s.projective == 4);
        let s = finite_field_locus_count(3, 7, LocusMode::Staged).unwrap();
        assert!(s.holds() && s.projective == 18);
        assert_eq!(partial_permutation_count(2, 5), 1 + 16 + 32);
        assert!(matches!(finite_field_locus_count(3, 5, LocusMode::Staged), Err(VarietyError::NoRootOfUnity { .. })));
        assert!(matches!(finite_field_locus_count(2, 9, LocusMode::Staged), Err(VarietyError::NotPrime(9))));
        assert!(matches!(finite_field_locus_count(4, 5, LocusMode::Full), Err(VarietyError::TooLarge)));
    }

    #[test]
    fn gf_images_of_roots() {
        let f = CycField::new(3).unwrap();
        assert_eq!(cyc_to_gf(&Cyc::root(&f, 1), 7, 2), 2);
        assert_eq!(cyc_to_gf(&Cyc::root(&f, 2), 7, 2), 4);
        let half = Cyc::from_rational(&f, &num_rational::BigRational::new(1.into(), 2.into()));
        assert_eq!(cyc_to_gf(&half, 7, 2), 4);
        assert_eq!(cyc_to_gf(&Cyc::from_int(&f, -1), 7, 2), 6);
    }
}
