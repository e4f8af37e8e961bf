//! Scalar backends.
//!
//! Every kernel in this crate is generic over [`Scalar`]. Two backends are
//! provided: [`Rational`] (arbitrary-precision fractions, exact) and `f64`.
//! Quantities that carry a square root, such as the coefficients of the
//! orthonormal basis, are represented by [`Surd`] so that they stay exact in
//! rational mode.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number backed by arbitrary-precision integers.
pub type Rational = BigRational;

/// Field operations shared by the exact and floating-point backends.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Converts an exact fraction. Floating-point backends round once.
    fn from_ratio(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(&Rational::from_integer(BigInt::from(v)))
    }

    fn to_f64(&self) -> f64;

    /// `√n` when it is representable in this backend.
    fn sqrt_u64(n: u64) -> Option<Self>;

    /// Integer power by repeated squaring; negative exponents invert.
    fn powi(&self, exp: i32) -> Self {
        let mut base = self.clone();
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        if exp < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_u64(n: u64) -> Option<Self> {
        Some((n as f64).sqrt())
    }

    fn powi(&self, exp: i32) -> Self {
        f64::powi(*self, exp)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_u64(n: u64) -> Option<Self> {
        exact_sqrt(n).map(|s| Rational::from_integer(BigInt::from(s)))
    }
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let mut s = (n as f64).sqrt() as u64;
    while s.saturating_mul(s) > n {
        s -= 1;
    }
    while (s + 1).saturating_mul(s + 1) <= n {
        s += 1;
    }
    (s * s == n).then_some(s)
}

/// Splits `n` into `(k, r)` with `n = k² · r` and `r` squarefree.
fn split_square(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut outside = 1;
    let mut rest = n;
    let mut f = 2u64;
    while f * f <= rest {
        while rest.is_multiple_of(f * f) {
            rest /= f * f;
            outside *= f;
        }
        f += 1;
    }
    (outside, rest)
}

/// Interval half-width `l > 0`; the interval is `[-l, l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfWidth<S>(S);

impl<S: Scalar> HalfWidth<S> {
    pub fn new(l: S) -> Result<Self> {
        if l > S::zero() {
            Ok(HalfWidth(l))
        } else {
            Err(Error::NonPositiveHalfWidth)
        }
    }

    /// `l = 1`, the unit interval `[-1, 1]`.
    pub fn unit() -> Self {
        HalfWidth(S::one())
    }

    pub fn get(&self) -> &S {
        &self.0
    }

    /// `[1, l, l², …, l^max]`.
    pub fn powers(&self, max: usize) -> Vec<S> {
        let mut out = Vec::with_capacity(max + 1);
        let mut acc = S::one();
        for _ in 0..max {
            let next = acc.clone() * self.0.clone();
            out.push(acc);
            acc = next;
        }
        out.push(acc);
        out
    }
}

impl HalfWidth<Rational> {
    /// The same interval in double precision.
    pub fn to_f64(&self) -> Result<HalfWidth<f64>> {
        HalfWidth::new(Scalar::to_f64(&self.0))
    }
}

/// Which backend a computation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    #[serde(rename = "rational")]
    ExactRational,
    #[serde(rename = "float")]
    Float64,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::ExactRational => f.write_str("rational"),
            ScalarMode::Float64 => f.write_str("float"),
        }
    }
}

impl FromStr for ScalarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" | "exact" => Ok(ScalarMode::ExactRational),
            "float" | "f64" => Ok(ScalarMode::Float64),
            other => Err(Error::InvalidArgument(format!("unknown scalar mode `{other}`"))),
        }
    }
}

/// `coeff · √radicand`, kept with a squarefree radicand.
///
/// The product of two surds with the same radicand is rational, which is all
/// the reduction formulas ever need.
#[derive(Debug, Clone, PartialEq)]
pub struct Surd<S> {
    coeff: S,
    radicand: u64,
}

impl<S: Scalar> Surd<S> {
    pub fn new(coeff: S, radicand: u64) -> Self {
        if coeff.is_zero() || radicand == 0 {
            return Surd {
                coeff: S::zero(),
                radicand: 1,
            };
        }
        let (outside, rest) = split_square(radicand);
        let coeff = if outside == 1 {
            coeff
        } else {
            coeff * S::from_i64(outside as i64)
        };
        Surd {
            coeff,
            radicand: rest,
        }
    }

    pub fn rational(coeff: S) -> Self {
        Surd::new(coeff, 1)
    }

    pub fn zero() -> Self {
        Surd {
            coeff: S::zero(),
            radicand: 1,
        }
    }

    pub fn coeff(&self) -> &S {
        &self.coeff
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn scale(&self, k: &S) -> Self {
        Surd::new(self.coeff.clone() * k.clone(), self.radicand)
    }

    pub fn mul(&self, other: &Surd<S>) -> Surd<S> {
        Surd::new(
            self.coeff.clone() * other.coeff.clone(),
            self.radicand * other.radicand,
        )
    }

    /// Sum of two surds; fails unless the radicands agree or one side is zero.
    pub fn add(&self, other: &Surd<S>) -> Result<Surd<S>> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.radicand != other.radicand {
            return Err(Error::UnresolvedRadical {
                left: self.radicand,
                right: other.radicand,
            });
        }
        Ok(Surd::new(
            self.coeff.clone() + other.coeff.clone(),
            self.radicand,
        ))
    }

    /// The plain scalar value, if the backend can represent the root.
    pub fn to_scalar(&self) -> Option<S> {
        if self.radicand == 1 {
            return Some(self.coeff.clone());
        }
        S::sqrt_u64(self.radicand).map(|r| self.coeff.clone() * r)
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64() * (self.radicand as f64).sqrt()
    }
}

/// Parses `"num/den"`, an integer, or a plain decimal (`"-1.25e3"`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: `{text}`"));
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in `{text}`")));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(text).ok_or_else(bad)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let value = Rational::from_integer(all) * ten.powi(shift);
    Some(if negative { -value } else { value })
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_width_rejects_non_positive() {
        assert_eq!(HalfWidth::new(0.0).unwrap_err(), Error::NonPositiveHalfWidth);
        assert_eq!(HalfWidth::new(-1.0).unwrap_err(), Error::NonPositiveHalfWidth);
        assert!(HalfWidth::new(f64::NAN).is_err());
        assert!(HalfWidth::new(ratio(-1, 2)).is_err());
        assert!(HalfWidth::new(ratio(1, 2)).is_ok());
    }

    #[test]
    fn powers_of_half_width() {
        let l = HalfWidth::new(ratio(3, 2)).unwrap();
        assert_eq!(l.powers(3), vec![ratio(1, 1), ratio(3, 2), ratio(9, 4), ratio(27, 8)]);
    }

    #[test]
    fn powi_handles_negative_exponents() {
        assert_eq!(ratio(2, 3).powi(-2), ratio(9, 4));
        assert_eq!(ratio(2, 3).powi(0), ratio(1, 1));
    }

    #[test]
    fn surd_normalizes_square_factors() {
        let s = Surd::new(ratio(1, 2), 18);
        assert_eq!(s.radicand(), 2);
        assert_eq!(s.coeff(), &ratio(3, 2));
        assert_eq!(Surd::new(ratio(0, 1), 7), Surd::zero());
    }

    #[test]
    fn same_radicand_product_is_rational() {
        let a = Surd::new(ratio(1, 3), 5);
        let b = Surd::new(ratio(2, 1), 5);
        assert_eq!(a.mul(&b).to_scalar(), Some(ratio(10, 3)));
        let c = Surd::new(ratio(1, 1), 3);
        assert_eq!(a.mul(&c).to_scalar(), None);
        assert!(a.add(&c).is_err());
        assert_eq!(a.add(&Surd::zero()).unwrap(), a);
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational("-4/6").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-1.25e2").unwrap(), ratio(-125, 1));
        assert_eq!(parse_rational("5E-1").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_rationals() {
        assert_eq!(format_rational(&ratio(4, 45)), "4/45");
        assert_eq!(format_rational(&ratio(-6, 3)), "-2");
    }
}
