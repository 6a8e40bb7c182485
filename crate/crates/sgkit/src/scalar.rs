//! Coefficient fields for all tensor computations.
//!
//! Every algebraic routine in this crate is generic over [`Scalar`]. Two
//! implementations matter to users: exact arbitrary-precision rationals
//! ([`Rat`]) for identity checking, and `f64` for flow integration. A third
//! (truncated polynomials, see `flow::jet`) drives the series integrator.
//! The mode is a type parameter, so a computation can never mix exact and
//! floating coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{One, Signed, Zero};

/// Exact rational scalar.
pub type Rat = num::BigRational;

/// A commutative ring with division, used as the coefficient field.
///
/// `nth_root` and the sign queries are partial: exact rationals only have
/// roots when numerator and denominator are perfect powers, and truncated
/// polynomials are ordered by their constant term only.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic is exact (no rounding anywhere).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(i: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;

    fn is_zero(&self) -> bool;

    /// Sign of the scalar (constant term for jets), if meaningful.
    fn sign(&self) -> Option<Ordering>;

    /// Positive n-th root, if representable in this field.
    fn nth_root(&self, n: u32) -> Option<Self>;

    /// Magnitude used for pivot selection and diagnostics. Never affects
    /// exact results, only elimination order and float reporting.
    fn magnitude(&self) -> f64;

    /// Best-effort conversion for reports.
    fn to_f64(&self) -> f64;

    fn sqrt(&self) -> Option<Self> {
        self.nth_root(2)
    }

    fn is_positive(&self) -> bool {
        self.sign() == Some(Ordering::Greater)
    }
}

fn exact_int_root(x: &BigInt, n: u32) -> Option<BigInt> {
    if x.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return exact_int_root(&-x, n).map(|r| -r);
    }
    let r = x.nth_root(n);
    if num::pow::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn from_int(i: i64) -> Self {
        Rat::from_integer(BigInt::from(i))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> Option<Ordering> {
        Some(self.cmp(&<Rat as Zero>::zero()))
    }
    fn nth_root(&self, n: u32) -> Option<Self> {
        // Ratio is kept reduced, so numerator and denominator must each be
        // perfect n-th powers for the root to stay rational.
        let num = exact_int_root(self.numer(), n)?;
        let den = exact_int_root(self.denom(), n)?;
        Some(Rat::new(num, den))
    }
    fn magnitude(&self) -> f64 {
        num::ToPrimitive::to_f64(self).map(f64::abs).unwrap_or(f64::INFINITY)
    }
    fn to_f64(&self) -> f64 {
        num::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
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
    fn from_int(i: i64) -> Self {
        i as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn sign(&self) -> Option<Ordering> {
        self.partial_cmp(&0.0)
    }
    fn nth_root(&self, n: u32) -> Option<Self> {
        if *self < 0.0 {
            if n % 2 == 0 {
                return None;
            }
            return (-self).nth_root(n).map(|r| -r);
        }
        Some(self.powf(1.0 / f64::from(n)))
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Shorthand constructor for exact rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand constructor for exact integers.
pub fn rint(i: i64) -> Rat {
    Rat::from_integer(BigInt::from(i))
}

/// Parses "p/q", "p" or a decimal integer string into a scalar.
pub fn parse_ratio<S: Scalar>(s: &str) -> Option<S> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        Some(S::from_ratio(p, q))
    } else {
        let p: i64 = s.parse().ok()?;
        Some(S::from_int(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let a = rat(1, 3);
        let b = rat(1, 6);
        assert_eq!(a + b, rat(1, 2));
        let c = rat(2, 7) * rat(7, 2);
        assert_eq!(c, rint(1));
    }

    #[test]
    fn exact_roots() {
        assert_eq!(
            rat(16, 81).nth_root(4),
            Some(rat(2, 3))
        );
        assert_eq!(rat(2, 3).nth_root(2), None);
        assert_eq!(rint(-8).nth_root(3), Some(rint(-2)));
        assert_eq!(rint(-4).nth_root(2), None);
        // 14-th roots show up in volume normalisations
        let x = rat(3, 5);
        let y = num::pow::pow(x.clone(), 14);
        assert_eq!(y.nth_root(14), Some(x));
    }

    #[test]
    fn parse_ratios() {
        assert_eq!(parse_ratio::<Rat>("-3/4"), Some(rat(-3, 4)));
        assert_eq!(parse_ratio::<Rat>("5"), Some(rint(5)));
        assert_eq!(parse_ratio::<f64>("1/2"), Some(0.5));
        assert_eq!(parse_ratio::<Rat>("1/0"), None);
    }
}
