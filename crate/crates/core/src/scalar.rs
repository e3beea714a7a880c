//! Number types used throughout the workbench.
//!
//! Everything numeric is generic over [`Scalar`], which has two
//! implementations: [`Rational`] (arbitrary precision, exact) and `f64`
//! (float mode, comparisons taken up to an absolute [`Tolerance`]).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Absolute comparison tolerance. Exact arithmetic ignores it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance(0.0);
    pub const DEFAULT_FLOAT: Tolerance = Tolerance(1e-9);
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT_FLOAT
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    /// Three-way comparison; values within `tol` of each other are `Equal`.
    fn compare(&self, other: &Self, tol: Tolerance) -> Ordering;

    /// Human-facing rendering: `3`, `-1/2`, or a float.
    fn render(&self) -> String;

    /// Report rendering: rationals always as `p/q`.
    fn serialize(&self) -> String;

    /// Parses `p/q`, integers, decimals and exponent notation.
    fn parse_literal(text: &str) -> Option<Self>;

    fn is_zero_tol(&self, tol: Tolerance) -> bool {
        self.compare(&Self::zero(), tol) == Ordering::Equal
    }

    fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.compare(other, tol) == Ordering::Equal
    }

    fn le_tol(&self, other: &Self, tol: Tolerance) -> bool {
        self.compare(other, tol) != Ordering::Greater
    }

    fn lt_tol(&self, other: &Self, tol: Tolerance) -> bool {
        self.compare(other, tol) == Ordering::Less
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn compare(&self, other: &Self, _tol: Tolerance) -> Ordering {
        self.cmp(other)
    }

    fn render(&self) -> String {
        format_rational(self)
    }

    fn serialize(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_literal(text: &str) -> Option<Self> {
        parse_rational(text)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn compare(&self, other: &Self, tol: Tolerance) -> Ordering {
        let diff = self - other;
        if diff.abs() <= tol.0 {
            Ordering::Equal
        } else if diff < 0.0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    fn render(&self) -> String {
        format!("{self}")
    }

    fn serialize(&self) -> String {
        format!("{self}")
    }

    fn parse_literal(text: &str) -> Option<Self> {
        f64::from_str(text.trim())
            .ok()
            .filter(|v: &f64| v.is_finite())
            .or_else(|| parse_rational(text).and_then(|r| ToPrimitive::to_f64(&r)))
    }
}

/// `3`, `-1/2`: integers without a denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, `-7`, `0.125`, `1e-3`, `-2.5E+2` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], i32::from_str(&text[pos + 1..]).ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if negative { -value } else { value })
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Maximum of a nonempty iterator under `compare`.
pub fn max_of<N: Scalar>(values: impl IntoIterator<Item = N>, tol: Tolerance) -> Option<N> {
    values.into_iter().fold(None, |best, v| match best {
        Some(b) if b.compare(&v, tol) != Ordering::Less => Some(b),
        _ => Some(v),
    })
}

pub fn min_of<N: Scalar>(values: impl IntoIterator<Item = N>, tol: Tolerance) -> Option<N> {
    values.into_iter().fold(None, |best, v| match best {
        Some(b) if b.compare(&v, tol) != Ordering::Greater => Some(b),
        _ => Some(v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literal_forms() {
        assert_eq!(parse_rational("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-3"), Some(int(-3)));
        assert_eq!(parse_rational("0.125"), Some(rat(1, 8)));
        assert_eq!(parse_rational("1e-3"), Some(rat(1, 1000)));
        assert_eq!(parse_rational("-2.5E+2"), Some(int(-250)));
        assert_eq!(parse_rational(".5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn rendering() {
        assert_eq!(rat(6, 2).render(), "3");
        assert_eq!(rat(6, 2).serialize(), "3/1");
        assert_eq!(rat(-1, 2).render(), "-1/2");
    }

    #[test]
    fn float_compare_uses_tolerance() {
        let tol = Tolerance(1e-9);
        assert_eq!(1.0f64.compare(&(1.0 + 1e-12), tol), Ordering::Equal);
        assert_eq!(1.0f64.compare(&1.1, tol), Ordering::Less);
        assert!(f64::parse_literal("1/4") == Some(0.25));
    }
}
