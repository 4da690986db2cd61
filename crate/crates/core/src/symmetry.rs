//! Monomial matrices `w^k D^j P_sigma`, affine permutations, and the
//! symmetry groups of the main decomposition.
//!
//! Conventions: `P_sigma = sum_i E_{i, sigma i}` and `D = diag(w, ..., w^d)`.
//! Residues `k, j, m, n` live in `[0, d)`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cyclotomic::{Cyc, CycError, CycField};
use crate::decompositions::{PowerDecomposition, PowerTerm, Scheme};
use crate::linalg::{determinant, mat_mul};
use crate::multipoly::LinForm;
use crate::perm::Perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("d = {0} is out of range")]
    OutOfRange(usize),
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    EvenModulus(u64),
    #[error("the action is only defined on the main scheme")]
    NotMainScheme,
    #[error("term {0} is not a monomial matrix")]
    OutsideM(usize),
    #[error("image of term {0} has no matching term")]
    NoImage(usize),
    #[error("det(A) det(B) = {0}, expected 1")]
    NotUnimodular(String),
    #[error("matrix has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] CycError),
}

fn rem(x: i64, d: usize) -> u32 {
    x.rem_euclid(d as i64) as u32
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn euler_totient(d: u64) -> u64 {
    (1..=d).filter(|&k| gcd(k, d) == 1).count() as u64
}

/// Jacobi symbol `(a / n)` for odd positive `n`, by quadratic reciprocity.
pub fn jacobi_symbol(a: i64, n: u64) -> Result<i8, SymmetryError> {
    if n.is_multiple_of(2) {
        return Err(SymmetryError::EvenModulus(n));
    }
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}

/// A matrix with one entry `w^{exps[i-1]}` per row `i`, in column `perm(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootMonomial {
    pub exps: Vec<u32>,
    pub perm: Perm,
}

impl RootMonomial {
    pub fn d(&self) -> usize {
        self.perm.degree()
    }

    pub fn scalar(d: usize, k: u32) -> Self {
        Self {
            exps: vec![k % d as u32; d],
            perm: Perm::identity(d),
        }
    }

    /// `D^n`.
    pub fn diagonal_power(d: usize, n: i64) -> Self {
        Self {
            exps: (1..=d).map(|i| rem(i as i64 * n, d)).collect(),
            perm: Perm::identity(d),
        }
    }

    pub fn permutation(sigma: &Perm) -> Self {
        Self {
            exps: vec![0; sigma.degree()],
            perm: sigma.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.d();
        Self {
            exps: (1..=d)
                .map(|i| (self.exps[i - 1] + other.exps[self.perm.apply(i) - 1]) % d as u32)
                .collect(),
            perm: other.perm.compose(&self.perm),
        }
    }

    pub fn transpose(&self) -> Self {
        let d = self.d();
        let mut exps = vec![0; d];
        for i in 1..=d {
            exps[self.perm.apply(i) - 1] = self.exps[i - 1];
        }
        Self {
            exps,
            perm: self.perm.inverse(),
        }
    }

    /// The canonical triple, if this matrix lies in `M`.
    pub fn normal_form(&self) -> Option<MonoMatrix> {
        let d = self.d();
        let j = if d == 1 { 0 } else { rem(self.exps[1] as i64 - self.exps[0] as i64, d) };
        let k = rem(self.exps[0] as i64 - j as i64, d);
        let fits = (1..=d).all(|i| self.exps[i - 1] == rem(k as i64 + i as i64 * j as i64, d));
        fits.then(|| MonoMatrix {
            k,
            j,
            sigma: self.perm.clone(),
        })
    }

    pub fn matrix(&self, field: &Arc<CycField>) -> Vec<Cyc> {
        let d = self.d();
        let mut m = vec![Cyc::zero(field); d * d];
        for i in 1..=d {
            m[(i - 1) * d + self.perm.apply(i) - 1] = Cyc::root(field, self.exps[i - 1] as i64);
        }
        m
    }

    /// Reads a `d x d` matrix whose nonzero entries form a permutation
    /// pattern of roots of unity.
    pub fn from_matrix(matrix: &[Cyc], d: usize) -> Option<Self> {
        if matrix.len() != d * d {
            return None;
        }
        let mut exps = Vec::with_capacity(d);
        let mut images = Vec::with_capacity(d);
        for row in matrix.chunks(d) {
            let mut nonzero = row.iter().enumerate().filter(|(_, c)| !c.is_zero());
            let (col, c) = nonzero.next()?;
            if nonzero.next().is_some() {
                return None;
            }
            exps.push(c.as_root_power()?);
            images.push(col + 1);
        }
        Some(Self {
            exps,
            perm: Perm::from_images(&images).ok()?,
        })
    }
}

/// `w^k D^j P_sigma`, entry `w^{k + ij}` at `(i, sigma i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoMatrix {
    pub k: u32,
    pub j: u32,
    pub sigma: Perm,
}

impl MonoMatrix {
    pub fn new(d: usize, k: i64, j: i64, sigma: Perm) -> Self {
        Self {
            k: rem(k, d),
            j: rem(j, d),
            sigma,
        }
    }

    pub fn d(&self) -> usize {
        self.sigma.degree()
    }

    pub fn root_monomial(&self) -> RootMonomial {
        let d = self.d();
        RootMonomial {
            exps: (1..=d).map(|i| rem(self.k as i64 + i as i64 * self.j as i64, d)).collect(),
            perm: self.sigma.clone(),
        }
    }

    pub fn matrix(&self, field: &Arc<CycField>) -> Vec<Cyc> {
        self.root_monomial().matrix(field)
    }

    /// All `d^2 d!` elements in `(k, j, sigma)` order.
    pub fn all(d: usize) -> Vec<Self> {
        let perms = Perm::all(d);
        let mut out = Vec::with_capacity(d * d * perms.len());
        for k in 0..d as i64 {
            for j in 0..d as i64 {
                out.extend(perms.iter().map(|s| Self::new(d, k, j, s.clone())));
            }
        }
        out
    }
}

impl fmt::Display for MonoMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{} D^{} P_{}", self.k, self.j, self.sigma)
    }
}

/// Membership in `M`: the canonical triple, or `None`.
pub fn mono_membership(matrix: &[Cyc], d: usize) -> Option<MonoMatrix> {
    RootMonomial::from_matrix(matrix, d)?.normal_form()
}

/// `i -> a i + b (mod d)`, representatives in `[1, d]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePerm {
    pub d: usize,
    pub a: u32,
    pub b: u32,
}

impl AffinePerm {
    pub fn new(d: usize, a: i64, b: i64) -> Option<Self> {
        let a = rem(a, d);
        let unit = gcd(a as u64, d as u64) == 1 || d == 1;
        unit.then(|| Self { d, a, b: rem(b, d) })
    }

    pub fn apply(&self, i: usize) -> usize {
        let v = rem(self.a as i64 * i as i64 + self.b as i64, self.d) as usize;
        if v == 0 {
            self.d
        } else {
            v
        }
    }

    pub fn perm(&self) -> Perm {
        Perm::from_images(&(1..=self.d).map(|i| self.apply(i)).collect::<Vec<_>>()).expect("affine map is bijective")
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            d: self.d,
            a: rem(self.a as i64 * other.a as i64, self.d),
            b: rem(self.a as i64 * other.b as i64 + self.b as i64, self.d),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = (0..self.d as i64)
            .find(|&x| rem(x * self.a as i64, self.d) == 1 % self.d as u32)
            .unwrap_or(0);
        Self {
            d: self.d,
            a: inv as u32,
            b: rem(-inv * self.b as i64, self.d),
        }
    }
}

impl fmt::Display for AffinePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i -> {}i + {}", self.a, self.b)
    }
}

/// All `d phi(d)` affine permutations, ordered by `(a, b)`.
pub fn affine_group(d: usize) -> Vec<AffinePerm> {
    if d == 1 {
        return vec![AffinePerm { d, a: 0, b: 0 }];
    }
    (1..d as i64)
        .flat_map(|a| (0..d as i64).filter_map(move |b| AffinePerm::new(d, a, b)))
        .collect()
}

/// The affine description of `pi`, if it has one.
pub fn as_affine(pi: &Perm) -> Option<AffinePerm> {
    let d = pi.degree();
    if d == 1 {
        return Some(AffinePerm { d, a: 0, b: 0 });
    }
    let a = pi.apply(2) as i64 - pi.apply(1) as i64;
    let b = pi.apply(1) as i64 - a;
    let f = AffinePerm::new(d, a, b)?;
    (1..=d).all(|i| f.apply(i) == pi.apply(i)).then_some(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLemmaReport {
    pub d: usize,
    pub holds: bool,
    /// Permutations `pi` with `P_pi D` in `M`.
    pub passing: usize,
    pub total: usize,
    pub constructive_ok: bool,
}

/// `P_pi D in M` iff `pi` is affine, for every `pi in S_d`, plus the identity
/// `P_sigma D = w^b D^a P_sigma` for `sigma: i -> ai + b`.
pub fn affine_lemma_check(d: usize) -> Result<AffineLemmaReport, SymmetryError> {
    if !(2..=7).contains(&d) {
        return Err(SymmetryError::OutOfRange(d));
    }
    let dmat = RootMonomial::diagonal_power(d, 1);
    let mut passing = 0;
    let mut holds = true;
    let perms = Perm::all(d);
    for pi in &perms {
        let in_m = RootMonomial::permutation(pi).mul(&dmat).normal_form().is_some();
        passing += in_m as usize;
        holds &= in_m == as_affine(pi).is_some();
    }
    let constructive_ok = affine_group(d).iter().all(|s| {
        let p = RootMonomial::permutation(&s.perm());
        let lhs = p.mul(&dmat);
        let rhs = RootMonomial::scalar(d, s.b)
            .mul(&RootMonomial::diagonal_power(d, s.a as i64))
            .mul(&p);
        lhs == rhs
    });
    Ok(AffineLemmaReport {
        d,
        holds: holds && constructive_ok,
        passing,
        total: perms.len(),
        constructive_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignFormulaReport {
    pub d: usize,
    pub holds: bool,
    pub shifts_checked: usize,
    pub units_checked: usize,
    /// First disagreeing affine map.
    pub failure: Option<AffinePerm>,
}

/// Predicted sign of `i -> a i` for a unit `a`.
pub fn multiplication_sign(a: u32, d: usize) -> Result<i8, SymmetryError> {
    if d % 2 == 1 {
        jacobi_symbol(a as i64, d as u64)
    } else {
        let e = (d as u64 / 2 + 1) * (a as u64 - 1) / 2;
        Ok(if e.is_multiple_of(2) { 1 } else { -1 })
    }
}

/// Compares the closed-form signs of shifts and multiplications with the
/// cycle parity of the actual permutations.
pub fn sign_formula_check(d: usize) -> Result<SignFormulaReport, SymmetryError> {
    if !(2..=12).contains(&d) {
        return Err(SymmetryError::OutOfRange(d));
    }
    let mut report = SignFormulaReport {
        d,
        holds: true,
        shifts_checked: 0,
        units_checked: 0,
        failure: None,
    };
    let record = |f: AffinePerm, ok: bool, report: &mut SignFormulaReport| {
        if !ok && report.holds {
            report.holds = false;
            report.failure = Some(f);
        }
    };
    for b in 0..d as i64 {
        let f = AffinePerm::new(d, 1, b).expect("1 is a unit");
        let predicted = if (b as usize * (d + 1)).is_multiple_of(2) { 1 } else { -1 };
        report.shifts_checked += 1;
        record(f, f.perm().sign() == predicted, &mut report);
    }
    for a in (1..d as i64).filter(|&a| gcd(a as u64, d as u64) == 1) {
        let f = AffinePerm::new(d, a, 0).expect("unit");
        report.units_checked += 1;
        record(f, f.perm().sign() == multiplication_sign(a as u32, d)?, &mut report);
    }
    Ok(report)
}

/// `X -> w^m D^n P_pi X P_sigma` with `pi` affine.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymElement {
    pub m: u32,
    pub n: u32,
    pub pi: AffinePerm,
    pub sigma: Perm,
}

/// A linear map on the `d x d` variables: output position `p` receives
/// `w^{exps[p]}` times input position `sources[p]` (row-major offsets).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InducedMap {
    pub exps: Vec<u32>,
    pub sources: Vec<usize>,
}

impl SymElement {
    pub fn d(&self) -> usize {
        self.sigma.degree()
    }

    pub fn identity(d: usize) -> Self {
        Self {
            m: 0,
            n: 0,
            pi: AffinePerm::new(d, 1, 0).expect("unit"),
            sigma: Perm::identity(d),
        }
    }

    /// `(self ∘ other)(X) = self(other(X))`.
    pub fn compose(&self, other: &Self) -> Self {
        let d = self.d();
        Self {
            m: rem(self.m as i64 + other.m as i64 + self.pi.b as i64 * other.n as i64, d),
            n: rem(self.n as i64 + self.pi.a as i64 * other.n as i64, d),
            pi: other.pi.compose(&self.pi),
            sigma: self.sigma.compose(&other.sigma),
        }
    }

    /// `det(h(X)) / det(X) = det(D)^n sign(pi) sign(sigma)`.
    pub fn multiplier(&self) -> i8 {
        let d = self.d();
        let det_d: i8 = if (d + 1).is_multiple_of(2) { 1 } else { -1 };
        let det_pow = if self.n.is_multiple_of(2) { 1 } else { det_d };
        det_pow * self.pi.perm().sign() * self.sigma.sign()
    }

    pub fn apply(&self, a: &RootMonomial) -> RootMonomial {
        let d = self.d();
        RootMonomial::scalar(d, self.m)
            .mul(&RootMonomial::diagonal_power(d, self.n as i64))
            .mul(&RootMonomial::permutation(&self.pi.perm()))
            .mul(a)
            .mul(&RootMonomial::permutation(&self.sigma))
    }

    /// Entry `(r, c)` of `h(X)` is `w^{m + rn} X_{pi r, sigma^{-1} c}`.
    pub fn induced(&self) -> InducedMap {
        let d = self.d();
        let sinv = self.sigma.inverse();
        let mut exps = Vec::with_capacity(d * d);
        let mut sources = Vec::with_capacity(d * d);
        for r in 1..=d {
            for c in 1..=d {
                exps.push(rem(self.m as i64 + r as i64 * self.n as i64, d));
                sources.push((self.pi.apply(r) - 1) * d + sinv.apply(c) - 1);
            }
        }
        InducedMap { exps, sources }
    }
}

impl InducedMap {
    /// `self ∘ other`.
    pub fn compose(&self, other: &Self, d: usize) -> Self {
        Self {
            exps: (0..self.exps.len())
                .map(|p| (self.exps[p] + other.exps[self.sources[p]]) % d as u32)
                .collect(),
            sources: self.sources.iter().map(|&s| other.sources[s]).collect(),
        }
    }
}

impl fmt::Display for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{} D^{} P[{}] X P_{}", self.m, self.n, self.pi, self.sigma)
    }
}

/// Every `(m, n, pi, sigma)` in lexicographic order; this is `H~`.
pub fn all_symmetries(d: usize) -> Vec<SymElement> {
    let aff = affine_group(d);
    let perms = Perm::all(d);
    let mut out = Vec::new();
    for m in 0..d as u32 {
        for n in 0..d as u32 {
            for pi in &aff {
                for sigma in &perms {
                    out.push(SymElement {
                        m,
                        n,
                        pi: *pi,
                        sigma: sigma.clone(),
                    });
                }
            }
        }
    }
    out
}

/// `count` uniformly random elements of `H~`.
pub fn sample_symmetries(d: usize, count: usize, seed: u64) -> Vec<SymElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let aff = affine_group(d);
    (0..count)
        .map(|_| {
            let mut images: Vec<usize> = (1..=d).collect();
            for k in (1..d).rev() {
                images.swap(k, rng.gen_range(0..=k));
            }
            SymElement {
                m: rng.gen_range(0..d as u32),
                n: rng.gen_range(0..d as u32),
                pi: aff[rng.gen_range(0..aff.len())],
                sigma: Perm::from_images(&images).expect("shuffle is a permutation"),
            }
        })
        .collect()
}

/// `|H|` as printed in the published order table.
pub fn table_order(d: usize) -> Option<u64> {
    match d {
        2 => Some(8),
        3 => Some(162),
        4 => Some(1536),
        5 => Some(37500),
        6 => Some(15552),
        _ => None,
    }
}

/// `d^3 phi(d) d! / 2`.
pub fn formula_order(d: usize) -> u64 {
    let fact: u64 = (1..=d as u64).product();
    (d as u64).pow(3) * euler_totient(d as u64) * fact / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryEnumeration {
    pub d: usize,
    pub tilde_order: u64,
    pub h_order: u64,
    pub reversing: u64,
    /// `None` when the faithfulness check was skipped.
    pub faithful: Option<bool>,
    pub formula: u64,
    pub table: Option<u64>,
    /// `H` itself when requested.
    pub elements: Vec<SymElement>,
}

impl SymmetryEnumeration {
    pub fn matches_formula(&self) -> bool {
        self.h_order == self.formula
    }

    pub fn matches_table(&self) -> Option<bool> {
        self.table.map(|t| t == self.h_order)
    }

    pub fn half_split(&self) -> bool {
        self.h_order * 2 == self.tilde_order && self.reversing == self.h_order
    }
}

/// Enumerates `H~` and splits it by determinant multiplier. `full` keeps
/// the elements of `H` and checks that no two tuples induce the same map.
pub fn enumerate_symmetries(d: usize, full: bool) -> Result<SymmetryEnumeration, SymmetryError> {
    let limit = if full { 5 } else { 6 };
    if !(1..=limit).contains(&d) {
        return Err(SymmetryError::OutOfRange(d));
    }
    let all = all_symmetries(d);
    let multipliers: Vec<i8> = all.par_iter().map(|h| h.multiplier()).collect();
    let h_order = multipliers.iter().filter(|&&m| m == 1).count() as u64;
    let faithful = full.then(|| {
        let maps: HashSet<InducedMap> = all.par_iter().map(|h| h.induced()).collect();
        maps.len() == all.len()
    });
    let elements = if full {
        all.iter()
            .zip(&multipliers)
            .filter(|(_, &m)| m == 1)
            .map(|(h, _)| h.clone())
            .collect()
    } else {
        Vec::new()
    };
    Ok(SymmetryEnumeration {
        d,
        tilde_order: all.len() as u64,
        h_order,
        reversing: all.len() as u64 - h_order,
        faithful,
        formula: formula_order(d),
        table: table_order(d),
        elements,
    })
}

/// The main decomposition's terms indexed by their normal forms.
pub struct TermIndex {
    d: usize,
    points: Vec<RootMonomial>,
    coeffs: Vec<Cyc>,
    lookup: HashMap<(u32, Perm), usize>,
}

impl TermIndex {
    pub fn new(dec: &PowerDecomposition) -> Result<Self, SymmetryError> {
        if dec.scheme != Scheme::Main {
            return Err(SymmetryError::NotMainScheme);
        }
        let mut points = Vec::with_capacity(dec.terms.len());
        let mut lookup = HashMap::new();
        for (t, term) in dec.terms.iter().enumerate() {
            let rm = RootMonomial::from_matrix(term.form.matrix(), dec.d).ok_or(SymmetryError::OutsideM(t))?;
            let nf = rm.normal_form().ok_or(SymmetryError::OutsideM(t))?;
            lookup.insert((nf.j, nf.sigma), t);
            points.push(rm);
        }
        Ok(Self {
            d: dec.d,
            points,
            coeffs: dec.terms.iter().map(|t| t.coeff.clone()).collect(),
            lookup,
        })
    }

    /// Number of distinct `(j, sigma)` classes among the terms.
    pub fn distinct_classes(&self) -> usize {
        self.lookup.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    /// `images[t]` is the term that term `t` is sent to.
    pub images: Vec<usize>,
    pub bijective: bool,
    pub sign_preserving: bool,
    pub sign_reversing: bool,
}

/// Maps every term's coefficient matrix through `h`, strips the scalar
/// `w^k`, and matches the image with a term of the decomposition.
pub fn apply_symmetry(h: &SymElement, index: &TermIndex) -> Result<ActionReport, SymmetryError> {
    if h.d() != index.d {
        return Err(SymmetryError::OutOfRange(h.d()));
    }
    let mut images = Vec::with_capacity(index.points.len());
    let mut preserving = true;
    let mut reversing = true;
    for (t, a) in index.points.iter().enumerate() {
        let nf = h.apply(a).normal_form().ok_or(SymmetryError::OutsideM(t))?;
        let &image = index.lookup.get(&(nf.j, nf.sigma)).ok_or(SymmetryError::NoImage(t))?;
        let same = index.coeffs[image] == index.coeffs[t];
        preserving &= same;
        reversing &= !same;
        images.push(image);
    }
    let mut seen = vec![false; images.len()];
    images.iter().for_each(|&i| seen[i] = true);
    Ok(ActionReport {
        bijective: seen.iter().all(|&s| s),
        images,
        sign_preserving: preserving,
        sign_reversing: reversing,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSummary {
    pub d: usize,
    pub checked: usize,
    pub preserving: usize,
    pub reversing: usize,
    pub failures: usize,
    /// Elements whose outcome disagrees with their determinant multiplier.
    pub multiplier_mismatches: usize,
    pub sampled: bool,
}

impl ActionSummary {
    pub fn holds(&self) -> bool {
        self.failures == 0 && self.multiplier_mismatches == 0
    }
}

/// Applies each element to the main decomposition and tallies the outcomes.
pub fn action_summary(dec: &PowerDecomposition, elements: &[SymElement], sampled: bool) -> Result<ActionSummary, SymmetryError> {
    let index = TermIndex::new(dec)?;
    let reports: Vec<Result<ActionReport, SymmetryError>> =
        elements.par_iter().map(|h| apply_symmetry(h, &index)).collect();
    let mut s = ActionSummary {
        d: dec.d,
        checked: elements.len(),
        preserving: 0,
        reversing: 0,
        failures: 0,
        multiplier_mismatches: 0,
        sampled,
    };
    for (h, r) in elements.iter().zip(reports) {
        let outcome = match r {
            Ok(r) if r.bijective && r.sign_preserving => 1,
            Ok(r) if r.bijective && r.sign_reversing => -1,
            _ => 0,
        };
        match outcome {
            1 => s.preserving += 1,
            -1 => s.reversing += 1,
            _ => s.failures += 1,
        }
        if outcome != 0 && outcome != h.multiplier() {
            s.multiplier_mismatches += 1;
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransposeReport {
    pub d: usize,
    pub closed: bool,
    /// An element of `M` whose transpose is outside `M`.
    pub witness: Option<MonoMatrix>,
}

/// Whether `M` is closed under transposition. The candidate `D P_(1 2)`,
/// whose transpose is `P_(1 2) D`, is tried first.
pub fn transpose_closure(d: usize) -> Result<TransposeReport, SymmetryError> {
    if !(2..=7).contains(&d) {
        return Err(SymmetryError::OutOfRange(d));
    }
    let candidate = MonoMatrix::new(d, 0, 1, Perm::transposition(d, 1, 2).expect("d >= 2"));
    let fails = |m: &MonoMatrix| m.root_monomial().transpose().normal_form().is_none();
    let witness = if fails(&candidate) {
        Some(candidate)
    } else {
        MonoMatrix::all(d).into_iter().find(|m| fails(m))
    };
    Ok(TransposeReport {
        d,
        closed: witness.is_none(),
        witness,
    })
}

/// Replaces every coefficient matrix `C` by `A C B`. Valid when
/// `det(A) det(B) = 1`, since the new terms sum to `scale * det(A^t X B^t)`.
pub fn conjugate_decomposition(
    a: &[Cyc],
    b: &[Cyc],
    dec: &PowerDecomposition,
) -> Result<PowerDecomposition, SymmetryError> {
    let d = dec.d;
    for m in [a, b] {
        if m.len() != d * d {
            return Err(SymmetryError::DimensionMismatch {
                expected: d * d,
                got: m.len(),
            });
        }
    }
    let field = dec.field();
    let det = &determinant(&field, a, d) * &determinant(&field, b, d);
    if !det.is_one() {
        return Err(SymmetryError::NotUnimodular(det.to_string()));
    }
    let terms = dec
        .terms
        .iter()
        .map(|t| PowerTerm {
            label: t.label.clone(),
            coeff: t.coeff.clone(),
            form: LinForm::from_matrix(d, mat_mul(&field, &mat_mul(&field, a, t.form.matrix(), d), b, d)),
            exponent: t.exponent,
        })
        .collect();
    Ok(PowerDecomposition {
        terms,
        ..dec.clone()
    })
}
