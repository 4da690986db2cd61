//! Exact linear algebra over `Q(w)`: sparse row echelon form, dense solve,
//! determinants and matrix products.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclotomic::{Cyc, CycField};

/// A sparse row: `(column, value)` pairs with strictly increasing columns
/// and no zero values.
pub type SparseRow = Vec<(usize, Cyc)>;

/// Incremental row echelon form. Each stored row is normalized to a leading
/// 1 and keyed by its leading column.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Default for SparseEchelon {
    fn default() -> Self {
        Self::new()
    }
}

/// `a - k * b` on sparse rows.
fn axpy(a: &SparseRow, k: &Cyc, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        let take_a = y == b.len() || (x < a.len() && a[x].0 < b[y].0);
        let take_b = x == a.len() || (y < b.len() && b[y].0 < a[x].0);
        if take_a {
            out.push(a[x].clone());
            x += 1;
        } else if take_b {
            out.push((b[y].0, -&(k * &b[y].1)));
            y += 1;
        } else {
            let v = &a[x].1 - &(k * &b[y].1);
            if !v.is_zero() {
                out.push((a[x].0, v));
            }
            x += 1;
            y += 1;
        }
    }
    out
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self { pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the stored pivots (leading column first).
    /// Returns `true` if it was independent and has been added.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.retain(|(_, v)| !v.is_zero());
        while let Some((lead, value)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(pivot) => row = axpy(&row, &value, pivot),
                None => {
                    let inv = value.inv().expect("nonzero pivot");
                    let normalized = row.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
                    self.pivots.insert(lead, normalized);
                    return true;
                }
            }
        }
        false
    }
}

/// Solves `a x = b` for a dense `rows x cols` system. Free variables are set
/// to zero; `None` if the system is inconsistent.
pub fn solve_dense(field: &Arc<CycField>, a: &[Vec<Cyc>], b: &[Cyc]) -> Option<Vec<Cyc>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Cyc>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let k = m[i][c].clone();
                for t in c..=cols {
                    let sub = &k * &m[r][t];
                    m[i][t] -= &sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Cyc::zero(field); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Determinant of a `d x d` row-major matrix by elimination.
pub fn determinant(field: &Arc<CycField>, matrix: &[Cyc], d: usize) -> Cyc {
    let mut m: Vec<Vec<Cyc>> = matrix.chunks(d).map(|r| r.to_vec()).collect();
    let mut det = Cyc::one(field);
    for c in 0..d {
        let Some(p) = (c..d).find(|&i| !m[i][c].is_zero()) else {
            return Cyc::zero(field);
        };
        if p != c {
            m.swap(p, c);
            det = -&det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().expect("nonzero pivot");
        for i in c + 1..d {
            if m[i][c].is_zero() {
                continue;
            }
            let k = &m[i][c] * &inv;
            for t in c..d {
                let sub = &k * &m[c][t];
                m[i][t] -= &sub;
            }
        }
    }
    det
}

/// Product of two `d x d` row-major matrices.
pub fn mat_mul(field: &Arc<CycField>, a: &[Cyc], b: &[Cyc], d: usize) -> Vec<Cyc> {
    let mut out = vec![Cyc::zero(field); d * d];
    for i in 0..d {
        for k in 0..d {
            let x = &a[i * d + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..d {
                let y = &b[k * d + j];
                if !y.is_zero() {
                    out[i * d + j] += &(x * y);
                }
            }
        }
    }
    out
}

pub fn identity_matrix(field: &Arc<CycField>, d: usize) -> Vec<Cyc> {
    (0..d * d)
        .map(|k| if k / d == k % d { Cyc::one(field) } else { Cyc::zero(field) })
        .collect()
}

pub fn transpose(matrix: &[Cyc], d: usize) -> Vec<Cyc> {
    (0..d * d).map(|k| matrix[(k % d) * d + k / d].clone()).collect()
}
