//! Exact arithmetic in the cyclotomic field `Q(w_d) = Q[x] / Phi_d(x)` and in
//! prime fields `GF(p)`.
//!
//! Elements of `Q(w_d)` are stored as an integer numerator vector over the
//! power basis `1, w, ..., w^(phi(d)-1)` together with a positive common
//! denominator. The representation is reduced (the gcd of all numerators and
//! the denominator is one), so two elements are equal exactly when their
//! stored data agrees and zero-testing is a scan of the numerators.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("root of unity order must be positive")]
    ZeroOrder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: Q(w_{left}) vs Q(w_{right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("expected {expected} coefficients, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no primitive {d}-th root of unity in GF({p}): {d} does not divide p - 1")]
    NoRootOfUnity { d: u32, p: u64 },
    #[error("value {value} is not reduced modulo {p}")]
    NotReduced { value: u64, p: u64 },
}

/// Coefficients of the `d`-th cyclotomic polynomial, lowest degree first.
///
/// Computed by exact division of `x^d - 1` by `Phi_e` for every proper
/// divisor `e` of `d`.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn cyclotomic_polynomial(d: u32) -> Vec<i64> {
    assert!(d >= 1, "cyclotomic polynomial of order 0");
    let mut cache = BTreeMap::new();
    cyclotomic_rec(d, &mut cache)
}

fn cyclotomic_rec(d: u32, cache: &mut BTreeMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&d) {
        return p.clone();
    }
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d.is_multiple_of(e) {
            let divisor = cyclotomic_rec(e, cache);
            num = divide_exact_monic(&num, &divisor);
        }
    }
    cache.insert(d, num.clone());
    num
}

/// Exact quotient of integer polynomials, `divisor` monic. Panics on a
/// nonzero remainder.
fn divide_exact_monic(num: &[i64], divisor: &[i64]) -> Vec<i64> {
    let n = num.len() - 1;
    let m = divisor.len() - 1;
    debug_assert_eq!(divisor[m], 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; n - m + 1];
    for k in (0..=n - m).rev() {
        let c = rem[k + m];
        quot[k] = c;
        if c != 0 {
            for (t, &dc) in divisor.iter().enumerate() {
                rem[k + t] -= c * dc;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// Reduction data for `Q(w_d)`.
#[derive(Debug)]
pub struct CycField {
    order: u32,
    modulus: Vec<i64>,
    degree: usize,
    // x^k mod Phi_d for k in degree..2*degree-1
    high_powers: Vec<Vec<i64>>,
    // w^k for k in 0..order
    roots: Vec<Vec<i64>>,
}

impl CycField {
    pub fn new(order: u32) -> Result<Arc<Self>, CycError> {
        if order == 0 {
            return Err(CycError::ZeroOrder);
        }
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let times_x = |v: &[i64]| -> Vec<i64> {
            let mut out = vec![0i64; degree];
            let top = v[degree - 1];
            for t in (1..degree).rev() {
                out[t] = v[t - 1];
            }
            for t in 0..degree {
                out[t] -= top * modulus[t];
            }
            out
        };
        let mut one = vec![0i64; degree];
        one[0] = 1;
        let mut roots = Vec::with_capacity(order as usize);
        let mut cur = one.clone();
        for _ in 0..order {
            roots.push(cur.clone());
            cur = times_x(&cur);
        }
        // cur is now w^order, which must be 1
        assert_eq!(cur, one, "w^d != 1 in Q(w_{order})");
        let mut high_powers = Vec::with_capacity(degree.saturating_sub(1));
        if degree >= 2 {
            let mut top = vec![0i64; degree];
            top[degree - 1] = 1;
            let mut p = times_x(&top);
            for _ in degree..2 * degree - 1 {
                high_powers.push(p.clone());
                p = times_x(&p);
            }
        }
        Ok(Arc::new(Self {
            order,
            modulus,
            degree,
            high_powers,
            roots,
        }))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `phi(d)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }
}

/// An element of `Q(w_d)`.
#[derive(Clone)]
pub struct Cyc {
    field: Arc<CycField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyc {
    pub fn zero(field: &Arc<CycField>) -> Self {
        Self {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CycField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CycField>, n: i64) -> Self {
        Self::from_bigint(field, BigInt::from(n))
    }

    pub fn from_bigint(field: &Arc<CycField>, n: BigInt) -> Self {
        let mut out = Self::zero(field);
        out.num[0] = n;
        out
    }

    pub fn from_rational(field: &Arc<CycField>, q: &BigRational) -> Self {
        let mut out = Self::zero(field);
        out.num[0] = q.numer().clone();
        out.den = q.denom().clone();
        out.normalize();
        out
    }

    /// `w^k`, for any integer `k`.
    pub fn root(field: &Arc<CycField>, k: i64) -> Self {
        let idx = k.rem_euclid(field.order as i64) as usize;
        Self {
            field: field.clone(),
            num: field.roots[idx].iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    /// Builds an element from its rational coordinates over the power basis.
    pub fn from_coeffs(field: &Arc<CycField>, coeffs: &[BigRational]) -> Result<Self, CycError> {
        if coeffs.len() != field.degree {
            return Err(CycError::BadLength {
                expected: field.degree,
                got: coeffs.len(),
            });
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = coeffs
            .iter()
            .map(|q| q.numer() * (&den / q.denom()))
            .collect();
        let mut out = Self {
            field: field.clone(),
            num,
            den,
        };
        out.normalize();
        Ok(out)
    }

    /// Builds an element from integer numerators and a common denominator.
    pub fn from_parts(field: &Arc<CycField>, num: Vec<BigInt>, den: BigInt) -> Result<Self, CycError> {
        if num.len() != field.degree {
            return Err(CycError::BadLength {
                expected: field.degree,
                got: num.len(),
            });
        }
        if den.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let mut out = Self {
            field: field.clone(),
            num,
            den,
        };
        out.normalize();
        Ok(out)
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// The exponent `k in [0, d)` with `self == w^k`, if any.
    pub fn as_root_power(&self) -> Option<u32> {
        if !self.den.is_one() {
            return None;
        }
        self.field.roots.iter().position(|r| {
            r.iter()
                .zip(&self.num)
                .all(|(&a, b)| BigInt::from(a) == *b)
        })
        .map(|k| k as u32)
    }

    fn same_field(&self, other: &Self) -> Result<(), CycError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order {
            Ok(())
        } else {
            Err(CycError::FieldMismatch {
                left: self.field.order,
                right: other.field.order,
            })
        }
    }

    fn normalize(&mut self) {
        if self.den.is_one() {
            return;
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for n in &mut self.num {
                *n = -&*n;
            }
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            self.den /= &g;
            for n in &mut self.num {
                *n /= &g;
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycError> {
        self.same_field(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycError> {
        self.same_field(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycError> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        out
    }

    fn add_assign_unchecked(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.den == other.den {
            for (a, b) in self.num.iter_mut().zip(&other.num) {
                *a += b;
            }
            if !self.den.is_one() {
                self.normalize();
            }
            return;
        }
        for a in self.num.iter_mut() {
            *a *= &other.den;
        }
        for (a, b) in self.num.iter_mut().zip(&other.num) {
            *a += b * &self.den;
        }
        self.den *= &other.den;
        self.normalize();
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let deg = self.field.degree;
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let mut prod = vec![BigInt::zero(); 2 * deg - 1];
        for (s, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[s + t] += a * b;
                }
            }
        }
        for k in (deg..2 * deg - 1).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (t, &r) in self.field.high_powers[k - deg].iter().enumerate() {
                if r != 0 {
                    prod[t] += &c * r;
                }
            }
        }
        prod.truncate(deg);
        let mut out = Self {
            field: self.field.clone(),
            num: prod,
            den: &self.den * &other.den,
        };
        out.normalize();
        out
    }

    fn neg_ref(&self) -> Self {
        Self {
            field: self.field.clone(),
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }

    /// Multiplies by an integer.
    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_one() {
            return self.clone();
        }
        let mut out = Self {
            field: self.field.clone(),
            num: self.num.iter().map(|n| n * k).collect(),
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_d` in `Q[x]`.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let modulus: Vec<BigRational> = self
            .field
            .modulus
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let a: Vec<BigRational> = self.coeffs();
        let (g, s) = rat_poly::ext_gcd(&a, &modulus);
        // Phi_d is irreducible, so g is a nonzero constant.
        debug_assert_eq!(g.len(), 1);
        let g0 = &g[0];
        let mut coeffs: Vec<BigRational> = s.iter().map(|c| c / g0).collect();
        coeffs.resize(self.field.degree, BigRational::zero());
        Self::from_coeffs(&self.field, &coeffs)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CycError> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }
}

mod rat_poly {
    use num_rational::BigRational;
    use num_traits::Zero;

    fn trim(p: &mut Vec<BigRational>) {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        if p.is_empty() {
            p.push(BigRational::zero());
        }
    }

    fn is_zero(p: &[BigRational]) -> bool {
        p.iter().all(Zero::is_zero)
    }

    fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut rem = a.to_vec();
        trim(&mut rem);
        let mut b = b.to_vec();
        trim(&mut b);
        let db = b.len() - 1;
        let lead = b[db].clone();
        if rem.len() - 1 < db || is_zero(&rem) {
            return (vec![BigRational::zero()], rem);
        }
        let mut quot = vec![BigRational::zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + db] / &lead;
            if !c.is_zero() {
                for (t, bc) in b.iter().enumerate() {
                    rem[k + t] = &rem[k + t] - &c * bc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(db.max(1));
        trim(&mut rem);
        (quot, rem)
    }

    fn sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(q.len() + b.len() - 1);
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in a.iter().enumerate() {
            out[i] = c.clone();
        }
        for (i, qc) in q.iter().enumerate() {
            for (j, bc) in b.iter().enumerate() {
                out[i + j] = &out[i + j] - qc * bc;
            }
        }
        trim(&mut out);
        out
    }

    /// Returns `(g, s)` with `s * a == g (mod m)`.
    pub(super) fn ext_gcd(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r0 = m.to_vec();
        let mut r1 = a.to_vec();
        trim(&mut r0);
        trim(&mut r1);
        let mut s0 = vec![BigRational::zero()];
        let mut s1 = vec![num_traits::One::one()];
        while !is_zero(&r1) {
            let (q, r) = divrem(&r0, &r1);
            let s2 = sub_mul(&s0, &q, &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        (r0, s0)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for Cyc {}

impl Hash for Cyc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[d={}]({})", self.field.order, self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, q) in self.coeffs().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let abs = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "w")?;
                    } else {
                        write!(f, "w^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

// Operator impls panic on mismatched fields; the `try_*` methods report it.

impl Add<&Cyc> for &Cyc {
    type Output = Cyc;
    fn add(self, rhs: &Cyc) -> Cyc {
        self.try_add(rhs).expect("cyclotomic field mismatch")
    }
}

impl Sub<&Cyc> for &Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &Cyc) -> Cyc {
        self.try_sub(rhs).expect("cyclotomic field mismatch")
    }
}

impl Mul<&Cyc> for &Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &Cyc) -> Cyc {
        self.try_mul(rhs).expect("cyclotomic field mismatch")
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        self.neg_ref()
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        self.neg_ref()
    }
}

impl AddAssign<&Cyc> for Cyc {
    fn add_assign(&mut self, rhs: &Cyc) {
        self.same_field(rhs).expect("cyclotomic field mismatch");
        self.add_assign_unchecked(rhs);
    }
}

impl SubAssign<&Cyc> for Cyc {
    fn sub_assign(&mut self, rhs: &Cyc) {
        self.same_field(rhs).expect("cyclotomic field mismatch");
        self.add_assign_unchecked(&rhs.neg_ref());
    }
}

/// `sum_{j=1}^{d} w^(p j)`, computed by summation in `Q(w_d)`.
pub fn root_power_sum(d: u32, p: i64) -> Result<Cyc, CycError> {
    let field = CycField::new(d)?;
    let mut acc = Cyc::zero(&field);
    for j in 1..=d as i64 {
        acc += &Cyc::root(&field, p * j);
    }
    Ok(acc)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// An element of `GF(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeScalar {
    p: u64,
    value: u64,
}

impl PrimeScalar {
    pub fn new(p: u64, value: u64) -> Result<Self, CycError> {
        if !is_prime(p) {
            return Err(CycError::NotPrime(p));
        }
        if value >= p {
            return Err(CycError::NotReduced { value, p });
        }
        Ok(Self { p, value })
    }

    pub fn from_i64(p: u64, v: i64) -> Result<Self, CycError> {
        if !is_prime(p) {
            return Err(CycError::NotPrime(p));
        }
        Ok(Self {
            p,
            value: v.rem_euclid(p as i64) as u64,
        })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self {
            p: self.p,
            value: (self.value + other.value) % self.p,
        }
    }

    pub fn sub(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self {
            p: self.p,
            value: (self.value + self.p - other.value) % self.p,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self {
            p: self.p,
            value: ((self.value as u128 * other.value as u128) % self.p as u128) as u64,
        }
    }

    pub fn neg(self) -> Self {
        Self {
            p: self.p,
            value: (self.p - self.value) % self.p,
        }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self { p: self.p, value: 1 % self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<Self, CycError> {
        if self.value == 0 {
            return Err(CycError::DivisionByZero);
        }
        Ok(self.pow(self.p - 2))
    }

    /// Multiplicative order; `None` for zero.
    pub fn order(self) -> Option<u64> {
        if self.value == 0 {
            return None;
        }
        let mut x = self;
        let mut k = 1;
        while x.value != 1 {
            x = x.mul(self);
            k += 1;
        }
        Some(k)
    }

    /// The smallest element of `GF(p)` of multiplicative order exactly `d`.
    pub fn primitive_root_of_unity(p: u64, d: u32) -> Result<Self, CycError> {
        if d == 0 {
            return Err(CycError::ZeroOrder);
        }
        if !is_prime(p) {
            return Err(CycError::NotPrime(p));
        }
        if !(p - 1).is_multiple_of(d as u64) {
            return Err(CycError::NoRootOfUnity { d, p });
        }
        (1..p)
            .map(|v| Self { p, value: v })
            .find(|x| x.order() == Some(d as u64))
            .ok_or(CycError::NoRootOfUnity { d, p })
    }
}

impl fmt::Display for PrimeScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(d: u32) -> Arc<CycField> {
        CycField::new(d).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // degree is phi(d)
        let phis = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for d in 1..=12u32 {
            assert_eq!(cyclotomic_polynomial(d).len() - 1, phis[d as usize - 1]);
        }
    }

    #[test]
    fn basic_relations() {
        let f2 = field(2);
        let w = Cyc::root(&f2, 1);
        assert!((&w * &w).is_one());
        assert_eq!(w, Cyc::from_int(&f2, -1));

        let f4 = field(4);
        let w2 = Cyc::root(&f4, 2);
        assert!((&w2 + &Cyc::one(&f4)).is_zero());

        let f3 = field(3);
        assert_eq!(Cyc::root(&f3, 1).inv().unwrap(), Cyc::root(&f3, 2));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = field(5);
        assert_eq!(Cyc::zero(&f).inv(), Err(CycError::DivisionByZero));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = Cyc::one(&field(3));
        let b = Cyc::one(&field(4));
        assert_eq!(
            a.try_add(&b),
            Err(CycError::FieldMismatch { left: 3, right: 4 })
        );
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn root_power_sum_examples() {
        assert_eq!(root_power_sum(3, 3).unwrap(), Cyc::from_int(&field(3), 3));
        assert!(root_power_sum(3, 1).unwrap().is_zero());
        assert!(root_power_sum(4, 2).unwrap().is_zero());
    }

    #[test]
    fn primitivity_by_exhaustion() {
        for d in 1..=12u32 {
            let f = field(d);
            for k in 0..d as i64 {
                assert_eq!(Cyc::root(&f, k).is_one(), k == 0, "d={d} k={k}");
            }
            assert!(Cyc::root(&f, d as i64).is_one());
        }
    }

    #[test]
    fn root_power_sum_closed_form() {
        for d in 1..=12u32 {
            let f = field(d);
            for p in -3 * d as i64..=3 * d as i64 {
                let expected = if p % d as i64 == 0 {
                    Cyc::from_int(&f, d as i64)
                } else {
                    Cyc::zero(&f)
                };
                assert_eq!(root_power_sum(d, p).unwrap(), expected, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn parity_bridge() {
        for d in 1..=12u32 {
            let f = field(d);
            let c = (d as i64 + 1) * d as i64 / 2;
            let lhs = Cyc::from_int(&f, if d % 2 == 1 { 1 } else { -1 });
            assert_eq!(Cyc::root(&f, -c), lhs, "d={d}");
            if d % 2 == 0 {
                assert_eq!(Cyc::root(&f, d as i64 / 2), Cyc::from_int(&f, -1));
            }
        }
    }

    #[test]
    fn rational_coefficients_normalize() {
        let f = field(3);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let a = Cyc::from_coeffs(&f, &[half.clone(), half.clone()]).unwrap();
        let b = &a + &a;
        assert_eq!(b, Cyc::from_coeffs(&f, &[BigRational::one(), BigRational::one()]).unwrap());
        assert!(b.denominator().is_one());
        // 1 + w = -w^2
        assert_eq!(b, -Cyc::root(&f, 2));
    }

    #[test]
    fn prime_field_roots() {
        let w = PrimeScalar::primitive_root_of_unity(7, 3).unwrap();
        assert_eq!(w.value(), 2);
        assert_eq!(w.pow(3).value(), 1);
        let w = PrimeScalar::primitive_root_of_unity(5, 4).unwrap();
        assert_eq!(w.value(), 2);
        assert_eq!(
            PrimeScalar::primitive_root_of_unity(7, 4),
            Err(CycError::NoRootOfUnity { d: 4, p: 7 })
        );
        assert_eq!(PrimeScalar::new(9, 1), Err(CycError::NotPrime(9)));
        let x = PrimeScalar::new(11, 7).unwrap();
        assert_eq!(x.mul(x.inv().unwrap()).value(), 1);
    }

    #[test]
    fn inverse_is_two_sided_on_random_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for d in 1..=8u32 {
            let deg = cyclotomic_polynomial(d).len() - 1;
            let mut checked = 0;
            while checked < 100 {
                let raw: Vec<(i64, i64)> = (0..deg)
                    .map(|_| (rng.gen_range(-20..=20), rng.gen_range(1..=5)))
                    .collect();
                let a = build(d, &raw);
                if a.is_zero() {
                    continue;
                }
                assert!((&a * &a.inv().unwrap()).is_one(), "d={d} a={a}");
                checked += 1;
            }
        }
    }

    fn arb_cyc(d: u32) -> impl Strategy<Value = Vec<(i64, i64)>> {
        let deg = cyclotomic_polynomial(d).len() - 1;
        prop::collection::vec((-20i64..20, 1i64..6), deg)
    }

    fn build(d: u32, raw: &[(i64, i64)]) -> Cyc {
        let f = field(d);
        let coeffs: Vec<BigRational> = raw
            .iter()
            .map(|&(n, m)| BigRational::new(BigInt::from(n), BigInt::from(m)))
            .collect();
        Cyc::from_coeffs(&f, &coeffs).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_laws_d6(a in arb_cyc(6), b in arb_cyc(6), c in arb_cyc(6)) {
            let (a, b, c) = (build(6, &a), build(6, &b), build(6, &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }
    }
}
