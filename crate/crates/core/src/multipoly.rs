//! Sparse multivariate polynomials over `Q(w_d)` in the matrix variables
//! `x_{i,j}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use crate::cyclotomic::{Cyc, CycError, CycField};
use crate::perm::Perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("exponents sum to {got}, expected {expected}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("row set has {rows} entries but column set has {cols}")]
    SizeMismatch { rows: usize, cols: usize },
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error(transparent)]
    Field(#[from] CycError),
}

/// The variable `x_{row,col}`, 1-based. Ordered row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub row: u8,
    pub col: u8,
}

impl VarId {
    pub fn new(row: usize, col: usize) -> Self {
        debug_assert!(row >= 1 && col >= 1 && row < 256 && col < 256);
        Self {
            row: row as u8,
            col: col as u8,
        }
    }

    pub fn row(self) -> usize {
        self.row as usize
    }

    pub fn col(self) -> usize {
        self.col as usize
    }

    /// Row-major offset into a `d x d` matrix stored as a flat slice.
    #[inline]
    pub fn index(self, d: usize) -> usize {
        (self.row as usize - 1) * d + self.col as usize - 1
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{},{}", self.row, self.col)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x_{{{},{}}}", self.row, self.col)
    }
}

/// A pure monomial: sorted `(variable, exponent)` pairs with positive
/// exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[(VarId, u32); 8]>);

impl Monomial {
    pub fn one() -> Self {
        Self(SmallVec::new())
    }

    pub fn var(v: VarId) -> Self {
        let mut s = SmallVec::new();
        s.push((v, 1));
        Self(s)
    }

    /// Collects factors, merging repeats and dropping zero exponents.
    pub fn from_factors<I: IntoIterator<Item = (VarId, u32)>>(factors: I) -> Self {
        let mut v: SmallVec<[(VarId, u32); 8]> = factors.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable_by_key(|&(var, _)| var);
        let mut out: SmallVec<[(VarId, u32); 8]> = SmallVec::new();
        for (var, e) in v {
            match out.last_mut() {
                Some((last, le)) if *last == var => *le += e,
                _ => out.push((var, e)),
            }
        }
        Self(out)
    }

    /// Builds from pairs already sorted by variable with positive exponents.
    pub(crate) fn from_sorted(v: SmallVec<[(VarId, u32); 8]>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(v.iter().all(|&(_, e)| e > 0));
        Self(v)
    }

    /// `x_{I,J} = x_{i_1,j_1} ... x_{i_d,j_d}`.
    pub fn from_index_pair(rows: &[usize], cols: &[usize]) -> Self {
        Self::from_factors(rows.iter().zip(cols).map(|(&i, &j)| (VarId::new(i, j), 1)))
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(var, _)| var)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_factors(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn map_vars(&self, f: impl Fn(VarId) -> VarId) -> Self {
        Self::from_factors(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            if e > 1 {
                write!(f, "^{{{e}}}")?;
            }
        }
        Ok(())
    }
}

/// `d! / prod(lambda_k!)`.
pub fn multinomial(d: u32, lambda: &[u32]) -> Result<BigUint, PolyError> {
    let total: u32 = lambda.iter().sum();
    if total != d {
        return Err(PolyError::DegreeMismatch {
            expected: d,
            got: total,
        });
    }
    let mut acc = BigUint::one();
    let mut remaining = d;
    for &l in lambda {
        acc *= binomial(remaining, l);
        remaining -= l;
    }
    Ok(acc)
}

pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Coefficient accumulator used while summing many expansions. Entries whose
/// sum cancels to zero are kept until [`SparsePoly::from_accumulator`].
pub type TermMap = HashMap<Monomial, Cyc>;

/// A sparse polynomial with coefficients in `Q(w_d)`. No stored
/// coefficient is zero.
#[derive(Clone)]
pub struct SparsePoly {
    field: Arc<CycField>,
    terms: TermMap,
}

impl SparsePoly {
    pub fn zero(field: &Arc<CycField>) -> Self {
        Self {
            field: field.clone(),
            terms: HashMap::new(),
        }
    }

    pub fn constant(c: Cyc) -> Self {
        let mut p = Self::zero(c.field());
        p.add_term(Monomial::one(), &c);
        p
    }

    pub fn var(field: &Arc<CycField>, v: VarId) -> Self {
        let mut p = Self::zero(field);
        p.terms.insert(Monomial::var(v), Cyc::one(field));
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Cyc)>>(field: &Arc<CycField>, terms: I) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    /// Drops cancelled entries.
    pub fn from_accumulator(field: &Arc<CycField>, mut terms: TermMap) -> Self {
        terms.retain(|_, c| !c.is_zero());
        Self {
            field: field.clone(),
            terms,
        }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &TermMap {
        &self.terms
    }

    /// Terms in canonical (row-major monomial) order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Cyc)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn add_term(&mut self, m: Monomial, c: &Cyc) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    /// `[m] self`.
    pub fn coefficient(&self, m: &Monomial) -> Cyc {
        self.terms.get(m).cloned().unwrap_or_else(|| Cyc::zero(&self.field))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Cyc) -> Self {
        let mut out = Self::zero(&self.field);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * k));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    /// `self^e` by repeated multiplication.
    pub fn pow_by_multiplication(&self, e: u32) -> Self {
        let mut acc = Self::constant(Cyc::one(&self.field));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Renames variables; terms that collide are summed.
    pub fn map_vars(&self, f: impl Fn(VarId) -> VarId) -> Self {
        let mut out = Self::zero(&self.field);
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(&f), c);
        }
        out
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    /// Evaluates at a point given as a function of the variables. Monomials
    /// containing a vanishing coordinate are skipped.
    pub fn eval_with(&self, value: impl Fn(VarId) -> Cyc) -> Cyc {
        let mut acc = Cyc::zero(&self.field);
        'terms: for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = value(v);
                if x.is_zero() {
                    continue 'terms;
                }
                t = &t * &x.pow(e);
            }
            acc += &t;
        }
        acc
    }

    /// Evaluates at a `d x d` matrix stored row-major.
    pub fn eval_matrix(&self, matrix: &[Cyc], d: usize) -> Cyc {
        self.eval_with(|v| matrix[v.index(d)].clone())
    }
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

/// A linear form `sum c_{i,j} x_{i,j}`, stored as its `d x d` coefficient
/// matrix (row-major).
#[derive(Clone, PartialEq, Eq)]
pub struct LinForm {
    d: usize,
    coeffs: Vec<Cyc>,
}

impl LinForm {
    pub fn zero(field: &Arc<CycField>, d: usize) -> Self {
        Self {
            d,
            coeffs: vec![Cyc::zero(field); d * d],
        }
    }

    pub fn from_matrix(d: usize, coeffs: Vec<Cyc>) -> Self {
        assert_eq!(coeffs.len(), d * d, "coefficient matrix must be d x d");
        Self { d, coeffs }
    }

    pub fn from_entries<I: IntoIterator<Item = (VarId, Cyc)>>(field: &Arc<CycField>, d: usize, entries: I) -> Self {
        let mut form = Self::zero(field, d);
        for (v, c) in entries {
            form.coeffs[v.index(d)] += &c;
        }
        form
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &Arc<CycField> {
        self.coeffs[0].field()
    }

    pub fn get(&self, v: VarId) -> &Cyc {
        &self.coeffs[v.index(self.d)]
    }

    pub fn matrix(&self) -> &[Cyc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Cyc::is_zero)
    }

    /// Nonzero entries in row-major order.
    pub fn support(&self) -> Vec<(VarId, &Cyc)> {
        let d = self.d;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (VarId::new(k / d + 1, k % d + 1), c))
            .collect()
    }

    pub fn to_poly(&self) -> SparsePoly {
        SparsePoly::from_terms(
            self.field(),
            self.support().into_iter().map(|(v, c)| (Monomial::var(v), c.clone())),
        )
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinForm({})", self.to_poly())
    }
}

/// Powers `c^0, ..., c^e` of each support coefficient of a form.
pub(crate) struct PowerTable {
    pub vars: Vec<VarId>,
    pub powers: Vec<Vec<Cyc>>,
}

impl PowerTable {
    pub fn new(form: &LinForm, e: u32) -> Self {
        let field = form.field();
        let support = form.support();
        let vars = support.iter().map(|&(v, _)| v).collect();
        let powers = support
            .iter()
            .map(|&(_, c)| {
                let mut row = Vec::with_capacity(e as usize + 1);
                row.push(Cyc::one(field));
                for k in 1..=e as usize {
                    let next = &row[k - 1] * c;
                    row.push(next);
                }
                row
            })
            .collect();
        Self { vars, powers }
    }
}

/// Pascal's triangle up to row `n` as signed integers.
pub(crate) fn binomial_table(n: u32) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n as usize + 1);
    for r in 0..=n as usize {
        let mut row = vec![BigInt::one(); r + 1];
        for k in 1..r {
            row[k] = &rows[r - 1][k - 1] + &rows[r - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Adds `scale * form^e` into `acc`, enumerating the weak compositions of
/// `e` over the support of `form` (multinomial theorem).
pub fn expand_power_into(form: &LinForm, e: u32, scale: &Cyc, acc: &mut TermMap) {
    let table = PowerTable::new(form, e);
    let binom = binomial_table(e);
    let mut exps: SmallVec<[(VarId, u32); 8]> = SmallVec::new();
    expand_rec(&table, &binom, 0, e, scale.clone(), &mut exps, acc);
}

fn expand_rec(
    table: &PowerTable,
    binom: &[Vec<BigInt>],
    v: usize,
    remaining: u32,
    partial: Cyc,
    exps: &mut SmallVec<[(VarId, u32); 8]>,
    acc: &mut TermMap,
) {
    let s = table.vars.len();
    if v == s {
        if remaining == 0 {
            let m = Monomial::from_sorted(exps.clone());
            match acc.get_mut(&m) {
                Some(c) => *c += &partial,
                None => {
                    acc.insert(m, partial);
                }
            }
        }
        return;
    }
    let var = table.vars[v];
    if v + 1 == s {
        if remaining > 0 {
            exps.push((var, remaining));
        }
        let next = &partial * &table.powers[v][remaining as usize];
        expand_rec(table, binom, v + 1, 0, next, exps, acc);
        if remaining > 0 {
            exps.pop();
        }
        return;
    }
    for l in 0..=remaining {
        if l == 0 {
            expand_rec(table, binom, v + 1, remaining, partial.clone(), exps, acc);
            continue;
        }
        exps.push((var, l));
        let next = (&partial * &table.powers[v][l as usize]).scale(&binom[remaining as usize][l as usize]);
        expand_rec(table, binom, v + 1, remaining - l, next, exps, acc);
        exps.pop();
    }
}

/// `form^e` via the multinomial theorem.
pub fn expand_power(form: &LinForm, e: u32) -> SparsePoly {
    let field = form.field().clone();
    let mut acc = HashMap::new();
    expand_power_into(form, e, &Cyc::one(&field), &mut acc);
    SparsePoly::from_accumulator(&field, acc)
}

/// `[m] form^e` without expanding: the multinomial coefficient times the
/// product of the coefficient powers.
pub fn power_coefficient(form: &LinForm, e: u32, m: &Monomial) -> Cyc {
    let field = form.field();
    if m.degree() != e {
        return Cyc::zero(field);
    }
    let mut acc = Cyc::one(field);
    let mut lambda = Vec::with_capacity(m.factors().len());
    for &(v, k) in m.factors() {
        if v.row() > form.d || v.col() > form.d {
            return Cyc::zero(field);
        }
        let c = form.get(v);
        if c.is_zero() {
            return Cyc::zero(field);
        }
        acc = &acc * &c.pow(k);
        lambda.push(k);
    }
    let mult = multinomial(e, &lambda).expect("degree already checked");
    acc.scale(&BigInt::from(mult))
}

/// The Leibniz expansion of `det_d` over `Q(w_d)`.
pub fn determinant_poly(d: usize) -> Result<SparsePoly, PolyError> {
    let field = CycField::new(d as u32)?;
    Ok(determinant_poly_in(&field, d))
}

/// The Leibniz expansion of the `d x d` determinant with coefficients in
/// the given field.
pub fn determinant_poly_in(field: &Arc<CycField>, d: usize) -> SparsePoly {
    let mut p = SparsePoly::zero(field);
    for sigma in Perm::all(d) {
        let m = Monomial::from_factors((1..=d).map(|i| (VarId::new(i, sigma.apply(i)), 1)));
        p.add_term(m, &Cyc::from_int(field, sigma.sign() as i64));
    }
    p
}

/// Permanent of the submatrix of `(x_{i,j})` on the given rows and columns.
pub fn permanent_poly(field: &Arc<CycField>, rows: &[usize], cols: &[usize]) -> Result<SparsePoly, PolyError> {
    if rows.len() != cols.len() {
        return Err(PolyError::SizeMismatch {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    for &i in rows.iter().chain(cols) {
        if i == 0 || i > 255 {
            return Err(PolyError::IndexOutOfRange(i, 255));
        }
    }
    let k = rows.len();
    let mut p = SparsePoly::zero(field);
    let one = Cyc::one(field);
    for tau in Perm::all(k) {
        let m = Monomial::from_factors((0..k).map(|t| (VarId::new(rows[t], cols[tau.apply(t + 1) - 1]), 1)));
        p.add_term(m, &one);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(d: u32) -> Arc<CycField> {
        CycField::new(d).unwrap()
    }

    fn x(i: usize, j: usize) -> VarId {
        VarId::new(i, j)
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(3, &[1, 1, 1]).unwrap(), BigUint::from(6u32));
        assert_eq!(multinomial(2, &[2, 0]).unwrap(), BigUint::from(1u32));
        assert_eq!(multinomial(4, &[2, 2]).unwrap(), BigUint::from(6u32));
        assert_eq!(
            multinomial(4, &[2, 1]),
            Err(PolyError::DegreeMismatch { expected: 4, got: 3 })
        );
    }

    #[test]
    fn square_of_binomial() {
        let f = field(2);
        let form = LinForm::from_entries(&f, 2, [(x(1, 1), Cyc::one(&f)), (x(2, 2), Cyc::one(&f))]);
        let sq = expand_power(&form, 2);
        assert_eq!(sq.len(), 3);
        let xy = Monomial::from_factors([(x(1, 1), 1), (x(2, 2), 1)]);
        assert_eq!(sq.coefficient(&xy), Cyc::from_int(&f, 2));
        assert_eq!(sq.coefficient(&Monomial::from_factors([(x(1, 1), 2)])), Cyc::one(&f));
        assert!(sq.coefficient(&Monomial::var(x(1, 2))).is_zero());
    }

    #[test]
    fn coefficient_of_multinomial_power() {
        // [x^alpha](x_1 + ... + x_n)^{|alpha|} is the multinomial coefficient
        let f = field(4);
        let form = LinForm::from_entries(&f, 4, (1..=4).map(|i| (x(i, i), Cyc::one(&f))));
        let p = expand_power(&form, 5);
        let alpha = [2u32, 0, 1, 2];
        let m = Monomial::from_factors((1..=4).map(|i| (x(i, i), alpha[i - 1])));
        assert_eq!(
            p.coefficient(&m),
            Cyc::from_bigint(&f, BigInt::from(multinomial(5, &alpha).unwrap()))
        );
    }

    #[test]
    fn single_variable_power() {
        let f = field(3);
        let c = Cyc::root(&f, 1);
        let form = LinForm::from_entries(&f, 3, [(x(1, 1), c.clone())]);
        let p = expand_power(&form, 3);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&Monomial::from_factors([(x(1, 1), 3)])), c.pow(3));
    }

    #[test]
    fn determinant_examples() {
        let d2 = determinant_poly(2).unwrap();
        let f = d2.field().clone();
        let expected = SparsePoly::from_terms(
            &f,
            [
                (Monomial::from_factors([(x(1, 1), 1), (x(2, 2), 1)]), Cyc::one(&f)),
                (Monomial::from_factors([(x(1, 2), 1), (x(2, 1), 1)]), Cyc::from_int(&f, -1)),
            ],
        );
        assert_eq!(d2, expected);
        let d3 = determinant_poly(3).unwrap();
        assert_eq!(d3.len(), 6);
        assert!(d3.coefficient(&Monomial::from_index_pair(&[1, 2, 3], &[1, 2, 3])).is_one());
        let d4 = determinant_poly(4).unwrap();
        assert_eq!(d4.len(), 24);
        let plus = d4.terms().values().filter(|c| c.is_one()).count();
        assert_eq!(plus, 12);
        assert!(d4.is_homogeneous(4));
    }

    #[test]
    fn permanent_examples() {
        let f = field(3);
        let p = permanent_poly(&f, &[2, 3], &[2, 3]).unwrap();
        let expected = SparsePoly::from_terms(
            &f,
            [
                (Monomial::from_index_pair(&[2, 3], &[2, 3]), Cyc::one(&f)),
                (Monomial::from_index_pair(&[2, 3], &[3, 2]), Cyc::one(&f)),
            ],
        );
        assert_eq!(p, expected);
        assert_eq!(permanent_poly(&f, &[2], &[3]).unwrap(), SparsePoly::var(&f, x(2, 3)));
        let f4 = field(4);
        let p = permanent_poly(&f4, &[1, 3], &[1, 2]).unwrap();
        assert_eq!(
            p,
            SparsePoly::from_terms(
                &f4,
                [
                    (Monomial::from_index_pair(&[1, 3], &[1, 2]), Cyc::one(&f4)),
                    (Monomial::from_index_pair(&[1, 3], &[2, 1]), Cyc::one(&f4)),
                ]
            )
        );
        assert!(matches!(
            permanent_poly(&f, &[1, 2], &[1]),
            Err(PolyError::SizeMismatch { rows: 2, cols: 1 })
        ));
    }

    #[test]
    fn determinant_is_alternating_in_rows() {
        for d in 2..=4 {
            let det = determinant_poly(d).unwrap();
            for (a, b) in [(1, 2), (1, d), (2, d)] {
                if a == b {
                    continue;
                }
                let swapped = det.map_vars(|v| {
                    let r = if v.row() == a {
                        b
                    } else if v.row() == b {
                        a
                    } else {
                        v.row()
                    };
                    VarId::new(r, v.col())
                });
                assert_eq!(swapped, det.neg(), "d={d} swap rows {a},{b}");
            }
        }
    }

    #[test]
    fn power_coefficient_matches_expansion() {
        let f = field(5);
        let form = LinForm::from_entries(
            &f,
            3,
            [(x(1, 2), Cyc::root(&f, 1)), (x(2, 3), Cyc::from_int(&f, -2)), (x(3, 1), Cyc::root(&f, 3))],
        );
        let p = expand_power(&form, 4);
        for (m, c) in p.terms() {
            assert_eq!(&power_coefficient(&form, 4, m), c);
        }
        assert!(power_coefficient(&form, 4, &Monomial::from_factors([(x(1, 1), 4)])).is_zero());
    }

    fn arb_form() -> impl Strategy<Value = (Vec<(usize, usize, i64, i64)>, u32)> {
        (
            prop::collection::vec((1usize..=3, 1usize..=3, -3i64..=3, 0i64..6), 1..=4),
            1u32..=5,
        )
    }

    fn build_form(f: &Arc<CycField>, raw: &[(usize, usize, i64, i64)]) -> LinForm {
        LinForm::from_entries(
            f,
            3,
            raw.iter()
                .map(|&(i, j, c, k)| (x(i, j), &Cyc::from_int(f, c) * &Cyc::root(f, k))),
        )
    }

    fn count_of_pairs() -> impl Strategy<Value = Vec<(usize, usize, i64, i64)>> {
        prop::collection::vec((1usize..=3, 1usize..=3, -3i64..=3, 0i64..6), 0..6)
    }

    fn poly_from(f: &Arc<CycField>, raw: &[(usize, usize, i64, i64)]) -> SparsePoly {
        let mut p = SparsePoly::zero(f);
        for w in raw.chunks(2) {
            let m = Monomial::from_factors(w.iter().map(|&(i, j, _, _)| (x(i, j), 1)));
            p.add_term(m, &(&Cyc::from_int(f, w[0].2) * &Cyc::root(f, w[0].3)));
        }
        p
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn expansion_matches_repeated_multiplication((raw, e) in arb_form()) {
            let f = field(6);
            let form = build_form(&f, &raw);
            let fast = expand_power(&form, e);
            let slow = form.to_poly().pow_by_multiplication(e);
            prop_assert_eq!(&fast, &slow);
            let s = form.support().len() as u32;
            if s > 0 {
                // with nonzero coefficients every composition survives
                prop_assert_eq!(BigUint::from(fast.len()), binomial(e + s - 1, s - 1));
            }
        }

        #[test]
        fn ring_laws(a in count_of_pairs(), b in count_of_pairs(), c in count_of_pairs()) {
            let f = field(3);
            let (a, b, c) = (poly_from(&f, &a), poly_from(&f, &b), poly_from(&f, &c));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn insertion_order_is_irrelevant(raw in count_of_pairs()) {
            let f = field(4);
            let items: Vec<(Monomial, Cyc)> = raw
                .iter()
                .map(|&(i, j, c, k)| (Monomial::from_factors([(x(i, j), 1), (x(j, i), 1)]), &Cyc::from_int(&f, c) * &Cyc::root(&f, k)))
                .collect();
            let forward = SparsePoly::from_terms(&f, items.iter().cloned());
            let backward = SparsePoly::from_terms(&f, items.iter().rev().cloned());
            prop_assert_eq!(forward, backward);
        }
    }
}
