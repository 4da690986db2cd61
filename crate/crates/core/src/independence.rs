//! Linear independence of the main decomposition's terms.
//!
//! Each term `(sum_i w^{ij} x_{i,sigma i})^d` is identified with its
//! coefficient point `P_{sigma,j}`. The degree `d - 1` forms
//! `L_{sigma,j} = sum_k w^{kj} e_{sigma,k}` vanish at every point except
//! their own, which separates the terms. The rank oracle confirms the same
//! fact by exact elimination on the expanded terms.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::cyclotomic::{Cyc, CycError, CycField};
use crate::decompositions::main_decomposition;
use crate::linalg::SparseEchelon;
use crate::multipoly::{expand_power, Monomial, SparsePoly, VarId};
use crate::perm::Perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndependenceError {
    #[error("d = {0} is out of range for this check")]
    OutOfRange(usize),
    #[error("rank oracle at d = {0} is expensive; pass force to run it")]
    NeedsForce(usize),
    #[error("j = {j} must lie in 1..={d}")]
    BadJ { j: u32, d: usize },
    #[error("permutation has degree {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] CycError),
}

fn check_args(d: usize, sigma: &Perm, j: u32) -> Result<Arc<CycField>, IndependenceError> {
    if sigma.degree() != d {
        return Err(IndependenceError::DegreeMismatch {
            expected: d,
            got: sigma.degree(),
        });
    }
    if j == 0 || j as usize > d {
        return Err(IndependenceError::BadJ { j, d });
    }
    Ok(CycField::new(d as u32)?)
}

/// The coefficient matrix of the term `(sigma, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermPoint {
    pub sigma: Perm,
    pub j: u32,
    pub d: usize,
    /// Row-major `d x d`.
    pub coords: Vec<Cyc>,
}

impl TermPoint {
    pub fn get(&self, i: usize, k: usize) -> &Cyc {
        &self.coords[(i - 1) * self.d + k - 1]
    }
}

pub fn term_point(d: usize, sigma: &Perm, j: u32) -> Result<TermPoint, IndependenceError> {
    let field = check_args(d, sigma, j)?;
    let mut coords = vec![Cyc::zero(&field); d * d];
    for i in 1..=d {
        coords[VarId::new(i, sigma.apply(i)).index(d)] = Cyc::root(&field, i as i64 * j as i64);
    }
    Ok(TermPoint {
        sigma: sigma.clone(),
        j,
        d,
        coords,
    })
}

/// A homogeneous form read as a functional by evaluation at points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualForm {
    pub degree: u32,
    pub poly: SparsePoly,
}

impl DualForm {
    pub fn eval(&self, point: &TermPoint) -> Cyc {
        self.poly.eval_matrix(&point.coords, point.d)
    }
}

/// `e_{sigma,k} = prod_{i != k} x_{i, sigma i}`.
pub fn e_monomial(sigma: &Perm, k: usize) -> Monomial {
    Monomial::from_factors(
        (1..=sigma.degree())
            .filter(|&i| i != k)
            .map(|i| (VarId::new(i, sigma.apply(i)), 1)),
    )
}

/// `L_{sigma,j} = sum_k w^{kj} e_{sigma,k}`.
pub fn dual_form_l(d: usize, sigma: &Perm, j: u32) -> Result<DualForm, IndependenceError> {
    let field = check_args(d, sigma, j)?;
    let poly = SparsePoly::from_terms(
        &field,
        (1..=d).map(|k| (e_monomial(sigma, k), Cyc::root(&field, k as i64 * j as i64))),
    );
    Ok(DualForm {
        degree: d as u32 - 1,
        poly,
    })
}

/// `x_{1, sigma 1} * L_{sigma,j}`, a degree-`d` functional with the same
/// separation pattern.
pub fn promoted_form(d: usize, sigma: &Perm, j: u32) -> Result<DualForm, IndependenceError> {
    let l = dual_form_l(d, sigma, j)?;
    let x = SparsePoly::var(l.poly.field(), VarId::new(1, sigma.apply(1)));
    Ok(DualForm {
        degree: d as u32,
        poly: l.poly.mul(&x),
    })
}

/// Term indices in decomposition order: `sigma` lexicographic, `j` ascending.
pub fn term_indices(d: usize) -> Vec<(Perm, u32)> {
    Perm::all(d)
        .into_iter()
        .flat_map(|s| (1..=d as u32).map(move |j| (s.clone(), j)))
        .collect()
}

/// Entry `((sigma,j),(psi,m))` is `L_{sigma,j}(P_{psi,m})`.
#[derive(Clone, Debug)]
pub struct SeparationMatrix {
    pub d: usize,
    pub labels: Vec<(Perm, u32)>,
    pub entries: Vec<Vec<Cyc>>,
}

pub fn separation_matrix(d: usize) -> Result<SeparationMatrix, IndependenceError> {
    if !(2..=5).contains(&d) {
        return Err(IndependenceError::OutOfRange(d));
    }
    let labels = term_indices(d);
    let points: Vec<TermPoint> = labels.iter().map(|(s, j)| term_point(d, s, *j)).collect::<Result<_, _>>()?;
    let forms: Vec<DualForm> = labels.iter().map(|(s, j)| dual_form_l(d, s, *j)).collect::<Result<_, _>>()?;
    let entries = forms
        .par_iter()
        .map(|l| points.iter().map(|p| l.eval(p)).collect())
        .collect();
    Ok(SeparationMatrix { d, labels, entries })
}

/// The expected diagonal value `(-1)^{(d+1)j} d`.
pub fn expected_diagonal(field: &Arc<CycField>, d: usize, j: u32) -> Cyc {
    let sign = if ((d + 1) * j as usize).is_multiple_of(2) { 1 } else { -1 };
    Cyc::from_int(field, sign * d as i64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub d: usize,
    pub size: usize,
    pub diagonal_ok: bool,
    pub off_diagonal_nonzero: usize,
    /// First failing `(row, column)` in row-major order.
    pub first_violation: Option<(usize, usize)>,
}

impl SeparationReport {
    pub fn holds(&self) -> bool {
        self.diagonal_ok && self.off_diagonal_nonzero == 0
    }
}

impl SeparationMatrix {
    pub fn check(&self) -> SeparationReport {
        let field = CycField::new(self.d as u32).expect("d >= 1");
        let mut report = SeparationReport {
            d: self.d,
            size: self.labels.len(),
            diagonal_ok: true,
            off_diagonal_nonzero: 0,
            first_violation: None,
        };
        for (r, row) in self.entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let ok = if r == c {
                    let good = *v == expected_diagonal(&field, self.d, self.labels[r].1);
                    report.diagonal_ok &= good;
                    good
                } else {
                    if !v.is_zero() {
                        report.off_diagonal_nonzero += 1;
                    }
                    v.is_zero()
                };
                if !ok && report.first_violation.is_none() {
                    report.first_violation = Some((r, c));
                }
            }
        }
        report
    }
}

/// Checks that the promoted degree-`d` functionals keep the separation
/// pattern: nonzero at their own point, zero at all others.
pub fn promotion_check(d: usize) -> Result<bool, IndependenceError> {
    if !(2..=5).contains(&d) {
        return Err(IndependenceError::OutOfRange(d));
    }
    let labels = term_indices(d);
    let points: Vec<TermPoint> = labels.iter().map(|(s, j)| term_point(d, s, *j)).collect::<Result<_, _>>()?;
    let forms: Vec<DualForm> = labels.iter().map(|(s, j)| promoted_form(d, s, *j)).collect::<Result<_, _>>()?;
    Ok(forms.par_iter().enumerate().all(|(r, f)| {
        points
            .iter()
            .enumerate()
            .all(|(c, p)| f.eval(p).is_zero() != (r == c))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub d: usize,
    pub terms: usize,
    /// Distinct monomials occurring in the expanded terms.
    pub columns: usize,
    pub rank: usize,
}

/// Exact rank over `Q(w)` of the expanded main terms in the monomial basis.
/// `d = 5` is only run with `force`.
pub fn rank_oracle(d: usize, force: bool) -> Result<RankReport, IndependenceError> {
    match d {
        2..=4 => {}
        5 if force => {}
        5 => return Err(IndependenceError::NeedsForce(d)),
        _ => return Err(IndependenceError::OutOfRange(d)),
    }
    let dec = main_decomposition(d).map_err(|_| IndependenceError::OutOfRange(d))?;
    let expanded: Vec<SparsePoly> = dec.terms.par_iter().map(|t| expand_power(&t.form, t.exponent)).collect();
    let mut monomials: Vec<&Monomial> = expanded.iter().flat_map(|p| p.terms().keys()).collect();
    monomials.sort();
    monomials.dedup();
    let column: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let mut echelon = SparseEchelon::new();
    for p in &expanded {
        let mut row: Vec<(usize, Cyc)> = p.terms().iter().map(|(m, c)| (column[m], c.clone())).collect();
        row.sort_by_key(|(c, _)| *c);
        echelon.insert(row);
    }
    Ok(RankReport {
        d,
        terms: dec.terms.len(),
        columns: monomials.len(),
        rank: echelon.rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_point_examples() {
        let id2 = Perm::identity(2);
        let p = term_point(2, &id2, 1).unwrap();
        let f = CycField::new(2).unwrap();
        assert_eq!(p.get(1, 1), &Cyc::from_int(&f, -1));
        assert_eq!(p.get(2, 2), &Cyc::one(&f));
        assert!(p.get(1, 2).is_zero());

        let p = term_point(3, &Perm::identity(3), 3).unwrap();
        assert!((1..=3).all(|i| p.get(i, i).is_one()));

        let c = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let p = term_point(3, &c, 1).unwrap();
        let f = CycField::new(3).unwrap();
        assert_eq!(p.get(1, 2), &Cyc::root(&f, 1));
        assert_eq!(p.get(2, 3), &Cyc::root(&f, 2));
        assert!(p.get(3, 1).is_one());
        assert_eq!(p.coords.iter().filter(|c| !c.is_zero()).count(), 3);
        assert!(term_point(3, &c, 0).is_err());
    }

    #[test]
    fn points_match_main_forms() {
        for d in 1..=4 {
            let dec = main_decomposition(d).unwrap();
            for (t, (s, j)) in dec.terms.iter().zip(term_indices(d)) {
                assert_eq!(t.form.matrix(), &term_point(d, &s, j).unwrap().coords[..]);
            }
        }
    }

    #[test]
    fn dual_form_examples() {
        let f = CycField::new(2).unwrap();
        let l = dual_form_l(2, &Perm::identity(2), 2).unwrap();
        let expected = SparsePoly::from_terms(
            &f,
            [
                (Monomial::var(VarId::new(1, 1)), Cyc::one(&f)),
                (Monomial::var(VarId::new(2, 2)), Cyc::one(&f)),
            ],
        );
        assert_eq!(l.poly, expected);
        for d in 2..=5 {
            let s = Perm::all(d).pop().unwrap();
            assert_eq!(dual_form_l(d, &s, 1).unwrap().poly.len(), d);
        }
    }

    #[test]
    fn e_monomial_at_own_point() {
        for d in 2..=5 {
            let f = CycField::new(d as u32).unwrap();
            let c2 = ((d + 1) * d / 2) as i64;
            for s in Perm::all(d).into_iter().step_by(7) {
                for j in 1..=d as u32 {
                    let p = term_point(d, &s, j).unwrap();
                    for k in 1..=d {
                        let e = SparsePoly::from_terms(&f, [(e_monomial(&s, k), Cyc::one(&f))]);
                        let expected = Cyc::root(&f, c2 * j as i64 - k as i64 * j as i64);
                        assert_eq!(e.eval_matrix(&p.coords, d), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn separation_is_diagonal() {
        for d in 2..=4 {
            let m = separation_matrix(d).unwrap();
            let r = m.check();
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.size, d * (1..=d).product::<usize>());
        }
        assert!(separation_matrix(6).is_err());
    }

    #[test]
    fn promotion_keeps_pattern() {
        for d in 2..=4 {
            assert!(promotion_check(d).unwrap());
        }
    }

    #[test]
    fn rank_small() {
        assert_eq!(rank_oracle(2, false).unwrap().rank, 4);
        assert_eq!(rank_oracle(3, false).unwrap().rank, 18);
        assert_eq!(rank_oracle(5, false), Err(IndependenceError::NeedsForce(5)));
        assert!(rank_oracle(6, true).is_err());
    }
}
