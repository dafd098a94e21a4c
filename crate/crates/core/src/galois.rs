//! Arithmetic over GF(2⁸).
//!
//! Elements are bytes read as binary polynomials of degree < 8. Multiplication
//! reduces modulo [`PRIMITIVE_POLY`] and the primitive element α is the
//! polynomial `x` (value 2). Log/antilog tables are built at compile time.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};

use crate::error::{Error, Result};

/// x⁸ + x⁴ + x³ + x² + 1.
pub const PRIMITIVE_POLY: u16 = 0x11D;

/// Multiplicative order of α.
pub const FIELD_ORDER: usize = 255;

/// α^i for i in 0..510, doubled so that `EXP[log a + log b]` needs no reduction.
static EXP: [u8; 2 * FIELD_ORDER] = build_exp();
/// Discrete log base α. `LOG[0]` is unused.
static LOG: [u8; 256] = build_log();

pub(crate) const fn build_exp() -> [u8; 2 * FIELD_ORDER] {
    let mut table = [0u8; 2 * FIELD_ORDER];
    let mut x: u16 = 1;
    let mut i = 0;
    while i < 2 * FIELD_ORDER {
        table[i] = x as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= PRIMITIVE_POLY;
        }
        i += 1;
    }
    table
}

const fn build_log() -> [u8; 256] {
    let exp = build_exp();
    let mut table = [0u8; 256];
    let mut i = 0;
    while i < FIELD_ORDER {
        table[exp[i] as usize] = i as u8;
        i += 1;
    }
    table
}

/// An element of GF(2⁸).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);
    /// The primitive element α = x.
    pub const ALPHA: FieldElement = FieldElement(2);

    #[inline]
    pub const fn new(value: u8) -> Self {
        FieldElement(value)
    }

    #[inline]
    pub const fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// α^n for any integer n (negative exponents allowed).
    #[inline]
    pub fn alpha_pow(n: i64) -> Self {
        FieldElement(EXP[n.rem_euclid(FIELD_ORDER as i64) as usize])
    }

    /// `self^n`, with 0⁰ = 1. Negative exponents of zero are a domain error.
    pub fn pow(self, n: i64) -> Result<Self> {
        if self.is_zero() {
            return match n {
                0 => Ok(Self::ONE),
                n if n > 0 => Ok(Self::ZERO),
                _ => Err(Error::Domain("zero raised to a negative power".into())),
            };
        }
        let log = LOG[self.0 as usize] as i64;
        Ok(Self::alpha_pow(log * n.rem_euclid(FIELD_ORDER as i64)))
    }

    /// Discrete logarithm base α, in `0..=254`.
    pub fn log(self) -> Result<u8> {
        if self.is_zero() {
            Err(Error::Domain("logarithm of zero".into()))
        } else {
            Ok(LOG[self.0 as usize])
        }
    }

    pub fn inv(self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::Domain("inverse of zero".into()))
        } else {
            Ok(FieldElement(
                EXP[FIELD_ORDER - LOG[self.0 as usize] as usize],
            ))
        }
    }

    #[inline]
    pub fn square(self) -> Self {
        self * self
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#04x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#04x}", self.0)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        if self.0 == 0 || rhs.0 == 0 {
            return FieldElement(0);
        }
        FieldElement(EXP[LOG[self.0 as usize] as usize + LOG[rhs.0 as usize] as usize])
    }
}

impl MulAssign for FieldElement {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

pub fn gf_add(a: FieldElement, b: FieldElement) -> FieldElement {
    a + b
}

pub fn gf_mul(a: FieldElement, b: FieldElement) -> FieldElement {
    a * b
}

pub fn gf_inv(a: FieldElement) -> Result<FieldElement> {
    a.inv()
}

pub fn gf_pow(a: FieldElement, n: i64) -> Result<FieldElement> {
    a.pow(n)
}

pub fn gf_log(a: FieldElement) -> Result<u8> {
    a.log()
}

/// A polynomial over GF(2⁸), coefficients stored lowest degree first.
///
/// Trailing zero coefficients are always trimmed; the zero polynomial has an
/// empty coefficient list and reports degree 0.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FieldPolynomial {
    coeffs: Vec<FieldElement>,
}

impl FieldPolynomial {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        let mut p = FieldPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_bytes(coeffs: &[u8]) -> Self {
        Self::new(coeffs.iter().copied().map(FieldElement).collect())
    }

    pub fn zero() -> Self {
        FieldPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FieldPolynomial {
            coeffs: vec![FieldElement::ONE],
        }
    }

    /// The monic linear factor `x + root`.
    pub fn linear(root: FieldElement) -> Self {
        Self::new(vec![root, FieldElement::ONE])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: FieldElement) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Polynomial long division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::Domain("polynomial division by zero".into()));
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead_inv = divisor.coeffs[dd].inv()?;
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let c = rem[shift + dd] * lead_inv;
            quot[shift] = c;
            if c.is_zero() {
                continue;
            }
            for (k, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] += c * d;
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }
}

impl fmt::Debug for FieldPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c:?}"),
                1 => format!("{c:?}·x"),
                _ => format!("{c:?}·x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn poly_eval(p: &FieldPolynomial, x: FieldElement) -> FieldElement {
    p.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(v: u8) -> FieldElement {
        FieldElement(v)
    }

    /// Shift-and-add multiplication with reduction after every shift.
    fn slow_mul(a: u8, b: u8) -> u8 {
        let mut acc: u16 = 0;
        let mut a = a as u16;
        let mut b = b;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            a <<= 1;
            if a & 0x100 != 0 {
                a ^= PRIMITIVE_POLY;
            }
            b >>= 1;
        }
        acc as u8
    }

    #[test]
    fn add_examples() {
        assert_eq!(gf_add(fe(0x57), fe(0x57)), fe(0));
        assert_eq!(gf_add(fe(0xAB), fe(0)), fe(0xAB));
        assert_eq!(gf_add(fe(0x53), fe(0xCA)), fe(0x99));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(gf_mul(fe(2), fe(2)), fe(4));
        assert_eq!(gf_mul(fe(0x80), fe(2)), fe(0x1D));
        for a in 1..=255u8 {
            assert_eq!(gf_mul(fe(a), gf_inv(fe(a)).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn mul_matches_shift_and_add() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(gf_mul(fe(a), fe(b)).0, slow_mul(a, b), "{a} * {b}");
            }
        }
    }

    #[test]
    fn inverse() {
        assert_eq!(gf_inv(fe(1)).unwrap(), fe(1));
        let brute = (1..=255u8).find(|&v| slow_mul(2, v) == 1).unwrap();
        assert_eq!(gf_inv(fe(2)).unwrap(), fe(brute));
        assert!(gf_inv(fe(0)).is_err());
    }

    #[test]
    fn pow_and_log() {
        assert_eq!(gf_pow(FieldElement::ALPHA, 0).unwrap(), FieldElement::ONE);
        let mut x = FieldElement::ONE;
        for i in 1..=255 {
            x = gf_mul(x, FieldElement::ALPHA);
            if i < 255 {
                assert_ne!(x, FieldElement::ONE, "order divides {i}");
            }
        }
        assert_eq!(x, FieldElement::ONE);
        assert_eq!(gf_pow(FieldElement::ALPHA, 255).unwrap(), FieldElement::ONE);
        assert_eq!(gf_log(FieldElement::ONE).unwrap(), 0);
        assert!(gf_log(FieldElement::ZERO).is_err());
        assert_eq!(gf_pow(fe(0), 0).unwrap(), FieldElement::ONE);
        assert_eq!(gf_pow(fe(0), 3).unwrap(), FieldElement::ZERO);
        assert!(gf_pow(fe(0), -1).is_err());
        assert_eq!(gf_pow(fe(7), -1).unwrap(), gf_inv(fe(7)).unwrap());
    }

    #[test]
    fn alpha_is_primitive() {
        let mut seen = [false; 256];
        for i in 0..255 {
            let v = gf_pow(FieldElement::ALPHA, i).unwrap();
            assert!(!v.is_zero());
            assert!(!seen[v.0 as usize]);
            seen[v.0 as usize] = true;
        }
    }

    #[test]
    fn log_pow_inverse() {
        for a in 1..=255u8 {
            let l = gf_log(fe(a)).unwrap();
            assert_eq!(gf_pow(FieldElement::ALPHA, l as i64).unwrap(), fe(a));
        }
        for i in 0..255u8 {
            assert_eq!(gf_log(FieldElement::alpha_pow(i as i64)).unwrap(), i);
        }
    }

    #[test]
    fn poly_eval_examples() {
        let c = FieldPolynomial::from_bytes(&[5]);
        for x in 0..=255u8 {
            assert_eq!(poly_eval(&c, fe(x)), fe(5));
        }
        let p = FieldPolynomial::from_bytes(&[1, 1]);
        assert_eq!(poly_eval(&p, fe(1)), fe(0));
    }

    #[test]
    fn poly_div_rem_roundtrip() {
        let a = FieldPolynomial::from_bytes(&[3, 7, 0, 9, 1, 44]);
        let b = FieldPolynomial::from_bytes(&[5, 0, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree() < b.degree() || r.is_zero());
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(a.div_rem(&FieldPolynomial::zero()).is_err());
    }

    #[test]
    fn zero_polynomial_is_trimmed() {
        let p = FieldPolynomial::from_bytes(&[0, 0, 0]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
        assert_eq!(FieldPolynomial::from_bytes(&[1, 2, 0]).degree(), 1);
    }

    proptest! {
        #[test]
        fn field_axioms(a: u8, b: u8, c: u8) {
            let (a, b, c) = (fe(a), fe(b), fe(c));
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a + a, FieldElement::ZERO);
        }

        #[test]
        fn horner_matches_term_sum(coeffs in proptest::collection::vec(any::<u8>(), 0..12), x: u8) {
            let p = FieldPolynomial::from_bytes(&coeffs);
            let x = fe(x);
            let mut sum = FieldElement::ZERO;
            for (i, &c) in coeffs.iter().enumerate() {
                sum = gf_add(sum, gf_mul(fe(c), gf_pow(x, i as i64).unwrap()));
            }
            prop_assert_eq!(poly_eval(&p, x), sum);
        }
    }
}
