//! Generators for the power-sum decompositions of `det_d` (and of the
//! product `x_1 ... x_d`), the 5-term product identity for `det_3`, and the
//! table of known rank bounds.
//!
//! Every decomposition is stored in scaled form `scale * target = sum of
//! terms`, each term being `coeff * form^exponent`, so no division is ever
//! needed to state or check it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use thiserror::Error;

use crate::cyclotomic::{Cyc, CycError, CycField};
use crate::multipoly::{determinant_poly_in, factorial, LinForm, Monomial, SparsePoly, VarId};
pub use crate::perm::Perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("d = {0} is out of range")]
    OutOfRange(usize),
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("bound for d = {0} is not an integer")]
    NonIntegral(usize),
    #[error(transparent)]
    Field(#[from] CycError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Main,
    Classical,
    Gurvits,
    Monomial,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Main, Scheme::Classical, Scheme::Gurvits, Scheme::Monomial];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Main => "main",
            Scheme::Classical => "classical",
            Scheme::Gurvits => "gurvits",
            Scheme::Monomial => "monomial",
        }
    }

    /// Number of terms the scheme produces for `d >= 2`.
    pub fn term_count(self, d: usize) -> BigInt {
        let fact = BigInt::from(factorial(d as u32));
        let two_pow = BigInt::from(2).pow(d as u32 - 1);
        match self {
            Scheme::Main => BigInt::from(d) * fact,
            Scheme::Classical => two_pow * fact,
            Scheme::Gurvits => BigInt::from(d + 1) * fact,
            Scheme::Monomial => two_pow,
        }
    }

    pub fn build(self, d: usize) -> Result<PowerDecomposition, DecompositionError> {
        match self {
            Scheme::Main => main_decomposition(d),
            Scheme::Classical => classical_decomposition(d),
            Scheme::Gurvits => gurvits_decomposition(d),
            Scheme::Monomial => monomial_power_decomposition(d),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = DecompositionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "main" => Ok(Scheme::Main),
            "classical" => Ok(Scheme::Classical),
            "gurvits" => Ok(Scheme::Gurvits),
            "monomial" => Ok(Scheme::Monomial),
            other => Err(DecompositionError::UnknownScheme(other.to_string())),
        }
    }
}

/// What the left-hand side multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// The generic determinant `det_d`.
    Det,
    /// `x_{1,1} x_{2,2} ... x_{d,d}`.
    DiagonalProduct,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Det => "det",
            Target::DiagonalProduct => "diagonal-product",
        }
    }

    pub fn poly(self, field: &Arc<CycField>, d: usize) -> SparsePoly {
        match self {
            Target::Det => determinant_poly_in(field, d),
            Target::DiagonalProduct => SparsePoly::from_terms(
                field,
                [(
                    Monomial::from_factors((1..=d).map(|i| (VarId::new(i, i), 1))),
                    Cyc::one(field),
                )],
            ),
        }
    }
}

/// Which summand of its scheme a term is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermLabel {
    Main { sigma: Perm, j: u32 },
    /// `signs[0]` is always `+1`.
    Classical { sigma: Perm, signs: Vec<i8> },
    /// `omitted = None` is the full row sum.
    Gurvits { sigma: Perm, omitted: Option<u32> },
    Monomial { signs: Vec<i8> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerTerm {
    pub label: TermLabel,
    pub coeff: Cyc,
    pub form: LinForm,
    pub exponent: u32,
}

/// `scale * target = sum_t coeff_t * form_t^exponent_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerDecomposition {
    pub d: usize,
    pub scheme: Scheme,
    pub scale: BigInt,
    pub target: Target,
    pub terms: Vec<PowerTerm>,
}

impl PowerDecomposition {
    pub fn field(&self) -> Arc<CycField> {
        CycField::new(self.d as u32).expect("d >= 1")
    }

    pub fn target_poly(&self) -> SparsePoly {
        self.target.poly(&self.field(), self.d)
    }

    /// `scale * target` as a polynomial.
    pub fn scaled_target(&self) -> SparsePoly {
        let field = self.field();
        self.target_poly().scale(&Cyc::from_bigint(&field, self.scale.clone()))
    }
}

fn check_d(d: usize) -> Result<Arc<CycField>, DecompositionError> {
    if d == 0 || d > 255 {
        return Err(DecompositionError::OutOfRange(d));
    }
    Ok(CycField::new(d as u32)?)
}

fn sign_cyc(field: &Arc<CycField>, s: i64) -> Cyc {
    Cyc::from_int(field, s)
}

/// Sign vectors `eps in {+-1}^d` with `eps_1 = +1`, in binary counting order
/// on `eps_2, ..., eps_d` (`+1` before `-1`, last position fastest).
fn sign_vectors(d: usize) -> Vec<Vec<i8>> {
    let free = d - 1;
    (0..1u64 << free)
        .map(|mask| {
            let mut v = vec![1i8; d];
            for k in 0..free {
                if mask >> (free - 1 - k) & 1 == 1 {
                    v[k + 1] = -1;
                }
            }
            v
        })
        .collect()
}

/// `d * d! det_d = sum_{sigma, j} (-1)^sigma (-1)^{(d+1) j} (sum_i w^{ij} x_{i, sigma i})^d`.
///
/// Terms are listed with `sigma` in lexicographic one-line order and `j`
/// ascending from 1 to `d`.
pub fn main_decomposition(d: usize) -> Result<PowerDecomposition, DecompositionError> {
    let field = check_d(d)?;
    let mut terms = Vec::new();
    for sigma in Perm::all(d) {
        for j in 1..=d as u32 {
            let parity = if ((d as u64 + 1) * j as u64).is_multiple_of(2) { 1 } else { -1 };
            let coeff = sign_cyc(&field, sigma.sign() as i64 * parity);
            let form = LinForm::from_entries(
                &field,
                d,
                (1..=d).map(|i| (VarId::new(i, sigma.apply(i)), Cyc::root(&field, (i as i64) * j as i64))),
            );
            terms.push(PowerTerm {
                label: TermLabel::Main { sigma: sigma.clone(), j },
                coeff,
                form,
                exponent: d as u32,
            });
        }
    }
    Ok(PowerDecomposition {
        d,
        scheme: Scheme::Main,
        scale: BigInt::from(d) * BigInt::from(factorial(d as u32)),
        target: Target::Det,
        terms,
    })
}

/// `2^{d-1} d! det_d = sum_sigma (-1)^sigma sum_eps (prod eps_i) (sum_i eps_i x_{i, sigma i})^d`.
pub fn classical_decomposition(d: usize) -> Result<PowerDecomposition, DecompositionError> {
    let field = check_d(d)?;
    let signs = sign_vectors(d);
    let mut terms = Vec::new();
    for sigma in Perm::all(d) {
        for eps in &signs {
            let prod: i64 = eps.iter().map(|&e| e as i64).product();
            let form = LinForm::from_entries(
                &field,
                d,
                (1..=d).map(|i| (VarId::new(i, sigma.apply(i)), sign_cyc(&field, eps[i - 1] as i64))),
            );
            terms.push(PowerTerm {
                label: TermLabel::Classical {
                    sigma: sigma.clone(),
                    signs: eps.clone(),
                },
                coeff: sign_cyc(&field, sigma.sign() as i64 * prod),
                form,
                exponent: d as u32,
            });
        }
    }
    Ok(PowerDecomposition {
        d,
        scheme: Scheme::Classical,
        scale: BigInt::from(2).pow(d as u32 - 1) * BigInt::from(factorial(d as u32)),
        target: Target::Det,
        terms,
    })
}

/// `d! det_d = sum_sigma (-1)^sigma ((sum_i x_{i,sigma i})^d - sum_j (sum_{i != j} x_{i,sigma i})^d)`.
///
/// For `d = 1` the omitted-variable sum is empty, so that term is dropped and
/// the decomposition has a single term.
pub fn gurvits_decomposition(d: usize) -> Result<PowerDecomposition, DecompositionError> {
    let field = check_d(d)?;
    let mut terms = Vec::new();
    let one = Cyc::one(&field);
    for sigma in Perm::all(d) {
        let s = sigma.sign() as i64;
        let full = LinForm::from_entries(&field, d, (1..=d).map(|i| (VarId::new(i, sigma.apply(i)), one.clone())));
        terms.push(PowerTerm {
            label: TermLabel::Gurvits {
                sigma: sigma.clone(),
                omitted: None,
            },
            coeff: sign_cyc(&field, s),
            form: full,
            exponent: d as u32,
        });
        if d == 1 {
            continue;
        }
        for j in 1..=d {
            let form = LinForm::from_entries(
                &field,
                d,
                (1..=d)
                    .filter(|&i| i != j)
                    .map(|i| (VarId::new(i, sigma.apply(i)), one.clone())),
            );
            terms.push(PowerTerm {
                label: TermLabel::Gurvits {
                    sigma: sigma.clone(),
                    omitted: Some(j as u32),
                },
                coeff: sign_cyc(&field, -s),
                form,
                exponent: d as u32,
            });
        }
    }
    Ok(PowerDecomposition {
        d,
        scheme: Scheme::Gurvits,
        scale: BigInt::from(factorial(d as u32)),
        target: Target::Det,
        terms,
    })
}

/// `2^{d-1} d! x_{1,1} ... x_{d,d} = sum_eps (prod eps_i) (sum_i eps_i x_{i,i})^d`.
pub fn monomial_power_decomposition(d: usize) -> Result<PowerDecomposition, DecompositionError> {
    let field = check_d(d)?;
    let terms = sign_vectors(d)
        .into_iter()
        .map(|eps| {
            let prod: i64 = eps.iter().map(|&e| e as i64).product();
            let form = LinForm::from_entries(
                &field,
                d,
                (1..=d).map(|i| (VarId::new(i, i), sign_cyc(&field, eps[i - 1] as i64))),
            );
            PowerTerm {
                label: TermLabel::Monomial { signs: eps },
                coeff: sign_cyc(&field, prod),
                form,
                exponent: d as u32,
            }
        })
        .collect();
    Ok(PowerDecomposition {
        d,
        scheme: Scheme::Monomial,
        scale: BigInt::from(2).pow(d as u32 - 1) * BigInt::from(factorial(d as u32)),
        target: Target::DiagonalProduct,
        terms,
    })
}

/// A signed product of linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTerm {
    pub sign: i8,
    pub factors: Vec<LinForm>,
}

/// `det_3 = sum_t sign_t * prod(factors_t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDecomposition {
    pub d: usize,
    pub terms: Vec<ProductTerm>,
}

/// The 5-term product identity for `det_3` with coefficients in `{-1, 0, 1}`.
pub fn krishna_makam_det3() -> ProductDecomposition {
    let field = CycField::new(3).expect("order 3");
    let form = |entries: &[(usize, usize, i64)]| {
        LinForm::from_entries(
            &field,
            3,
            entries.iter().map(|&(i, j, c)| (VarId::new(i, j), Cyc::from_int(&field, c))),
        )
    };
    let terms = vec![
        ProductTerm {
            sign: 1,
            factors: vec![
                form(&[(1, 1, 1)]),
                form(&[(2, 2, 1), (2, 3, 1)]),
                form(&[(3, 1, 1), (3, 3, 1)]),
            ],
        },
        ProductTerm {
            sign: 1,
            factors: vec![form(&[(1, 2, 1), (1, 3, 1)]), form(&[(2, 1, 1)]), form(&[(3, 2, 1)])],
        },
        ProductTerm {
            sign: -1,
            factors: vec![form(&[(1, 1, 1), (1, 3, 1)]), form(&[(2, 2, 1)]), form(&[(3, 1, 1)])],
        },
        ProductTerm {
            sign: -1,
            factors: vec![
                form(&[(1, 2, 1)]),
                form(&[(2, 1, 1), (2, 3, 1)]),
                form(&[(3, 2, 1), (3, 3, 1)]),
            ],
        },
        ProductTerm {
            sign: 1,
            factors: vec![
                form(&[(1, 2, 1), (1, 1, -1)]),
                form(&[(2, 3, 1)]),
                form(&[(3, 1, 1), (3, 2, 1), (3, 3, 1)]),
            ],
        },
    ];
    ProductDecomposition { d: 3, terms }
}

/// One column of the bounds table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsRow {
    pub d: usize,
    pub classical: BigInt,
    pub derksen: BigInt,
    pub gurvits: BigInt,
    /// Only known for `d = 3`.
    pub cglv: Option<BigInt>,
    pub new: BigInt,
    pub lower: BigInt,
}

/// Upper and lower bounds on the Waring rank of `det_d` for `2 <= d <= d_max`.
pub fn bounds_table(d_max: usize) -> Result<Vec<BoundsRow>, DecompositionError> {
    if !(2..=20).contains(&d_max) {
        return Err(DecompositionError::OutOfRange(d_max));
    }
    (2..=d_max).map(bounds_row).collect()
}

fn bounds_row(d: usize) -> Result<BoundsRow, DecompositionError> {
    let fact = BigInt::from(factorial(d as u32));
    let classical = BigInt::from(2).pow(d as u32 - 1) * &fact;
    let ratio = BigRational::new(BigInt::from(5), BigInt::from(6)).pow((d / 3) as i32);
    let derksen = ratio * BigRational::from_integer(classical.clone());
    if !derksen.is_integer() {
        return Err(DecompositionError::NonIntegral(d));
    }
    let binom = |n: u32, k: u32| BigInt::from(crate::multipoly::binomial(n, k));
    let lower = if d == 3 {
        BigInt::from(17)
    } else {
        binom(2 * d as u32, d as u32) - binom(2 * d as u32 - 2, d as u32 - 1)
    };
    Ok(BoundsRow {
        d,
        derksen: derksen.to_integer(),
        gurvits: BigInt::from(d + 1) * &fact,
        cglv: (d == 3).then(|| BigInt::from(18)),
        new: BigInt::from(d) * &fact,
        lower,
        classical,
    })
}

impl BoundsRow {
    /// `lower <= new` and `new` is at most every other upper bound.
    pub fn consistent(&self) -> bool {
        let others = [Some(&self.classical), Some(&self.derksen), Some(&self.gurvits), self.cglv.as_ref()];
        self.lower <= self.new && others.into_iter().flatten().all(|b| self.new <= *b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn main_term_counts() {
        assert_eq!(main_decomposition(3).unwrap().terms.len(), 18);
        let d2 = main_decomposition(2).unwrap();
        assert_eq!(d2.terms.len(), 4);
        assert_eq!(d2.scale, BigInt::from(4));
        assert_eq!(main_decomposition(4).unwrap().terms.len(), 96);
    }

    #[test]
    fn other_term_counts() {
        assert_eq!(classical_decomposition(3).unwrap().terms.len(), 24);
        assert_eq!(classical_decomposition(2).unwrap().terms.len(), 4);
        assert_eq!(classical_decomposition(5).unwrap().terms.len(), 1920);
        assert_eq!(gurvits_decomposition(4).unwrap().terms.len(), 120);
        assert_eq!(gurvits_decomposition(2).unwrap().terms.len(), 6);
        assert_eq!(gurvits_decomposition(3).unwrap().terms.len(), 24);
        assert_eq!(monomial_power_decomposition(2).unwrap().terms.len(), 2);
        assert_eq!(monomial_power_decomposition(3).unwrap().terms.len(), 4);
        let m1 = monomial_power_decomposition(1).unwrap();
        assert_eq!((m1.terms.len(), m1.scale.clone()), (1, BigInt::one()));
    }

    #[test]
    fn counts_match_closed_forms() {
        for d in 2..=6 {
            for scheme in Scheme::ALL {
                if scheme == Scheme::Classical && d > 6 {
                    continue;
                }
                let dec = scheme.build(d).unwrap();
                assert_eq!(BigInt::from(dec.terms.len()), scheme.term_count(d), "{scheme} d={d}");
            }
        }
        assert_eq!(BigInt::from(main_decomposition(7).unwrap().terms.len()), Scheme::Main.term_count(7));
    }

    #[test]
    fn main_coefficients_are_units() {
        for d in 1..=5 {
            let dec = main_decomposition(d).unwrap();
            let f = dec.field();
            let one = Cyc::one(&f);
            let minus = Cyc::from_int(&f, -1);
            assert!(dec.terms.iter().all(|t| t.coeff == one || t.coeff == minus));
        }
    }

    #[test]
    fn main_forms_read_off() {
        let dec = main_decomposition(3).unwrap();
        let f = dec.field();
        let sigma = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let t = dec
            .terms
            .iter()
            .find(|t| t.label == TermLabel::Main { sigma: sigma.clone(), j: 1 })
            .unwrap();
        let support = t.form.support();
        assert_eq!(support.len(), 3);
        assert_eq!(support[0], (VarId::new(1, 2), &Cyc::root(&f, 1)));
        assert_eq!(support[1], (VarId::new(2, 3), &Cyc::root(&f, 2)));
        assert_eq!(support[2], (VarId::new(3, 1), &Cyc::one(&f)));
        // (123) is even, (d+1)j = 4 is even
        assert!(t.coeff.is_one());
    }

    #[test]
    fn two_by_two_monomial_identity() {
        // 4xy = (x+y)^2 - (x-y)^2
        let dec = monomial_power_decomposition(2).unwrap();
        assert_eq!(dec.scale, BigInt::from(4));
        let f = dec.field();
        assert!(dec.terms[0].coeff.is_one());
        assert_eq!(dec.terms[1].coeff, Cyc::from_int(&f, -1));
        assert_eq!(dec.terms[1].form.get(VarId::new(2, 2)), &Cyc::from_int(&f, -1));
    }

    #[test]
    fn product_identity_shape() {
        let km = krishna_makam_det3();
        assert_eq!(km.terms.len(), 5);
        assert_eq!(km.terms[0].sign, 1);
        assert_eq!(km.terms[4].sign, 1);
        let f = km.terms[4].factors[0].field().clone();
        assert_eq!(km.terms[4].factors[0].get(VarId::new(1, 1)), &Cyc::from_int(&f, -1));
        for t in &km.terms {
            for form in &t.factors {
                for (_, c) in form.support() {
                    assert!(c.is_one() || *c == Cyc::from_int(&f, -1));
                }
            }
        }
    }

    #[test]
    fn bounds_examples() {
        let table = bounds_table(6).unwrap();
        let d4 = &table[2];
        assert_eq!(
            [&d4.classical, &d4.derksen, &d4.gurvits, &d4.new, &d4.lower],
            [192, 160, 120, 96, 50].map(BigInt::from).iter().collect::<Vec<_>>()[..]
        );
        assert_eq!(table[1].lower, BigInt::from(17));
        assert_eq!(table[4].new, BigInt::from(4320));
        assert!(bounds_table(1).is_err());
        assert!(bounds_table(21).is_err());
        for row in bounds_table(20).unwrap() {
            assert!(row.consistent(), "d={}", row.d);
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert!("krishna".parse::<Scheme>().is_err());
    }
}
