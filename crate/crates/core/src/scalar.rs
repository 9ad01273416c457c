//! Scalar traits the solvers are generic over.
//!
//! Edge costs are a [`CostScalar`]; anything derived from a ratio of cost
//! differences (the parameter, keys, potentials, cycle means) lives in the
//! associated [`Field`]. Input graphs use `i64` costs whose field is the
//! exact [`Rational`](crate::Rational). The min-balance recursion works on
//! field-valued costs directly, so every field is also a cost scalar.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// An exactly representable, totally ordered edge-cost type.
pub trait CostScalar:
    Clone
    + Ord
    + Debug
    + Display
    + FromStr
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    type Field: Field;

    fn to_field(&self) -> Self::Field;

    /// `num / den`; `den` must be positive.
    fn ratio(num: &Self, den: u64) -> Self::Field;
}

/// An ordered field: closed under division by nonzero values.
pub trait Field: CostScalar<Field = Self> + One + Mul<Output = Self> + Div<Output = Self> {
    fn from_int(v: i64) -> Self;

    fn from_count(v: u64) -> Self;

    /// Lossy conversion for reporting only.
    fn to_f64(&self) -> f64;
}

impl CostScalar for i64 {
    type Field = Rational;

    fn to_field(&self) -> Rational {
        Rational::from_integer(*self as i128)
    }

    #[inline]
    fn ratio(num: &i64, den: u64) -> Rational {
        Rational::new(*num as i128, den as i128)
    }
}

impl CostScalar for Rational {
    type Field = Rational;

    fn to_field(&self) -> Rational {
        *self
    }

    #[inline]
    fn ratio(num: &Rational, den: u64) -> Rational {
        *num / Rational::from_integer(den as i128)
    }
}

impl Field for Rational {
    fn from_int(v: i64) -> Self {
        Rational::from_integer(v as i128)
    }

    fn from_count(v: u64) -> Self {
        Rational::from_integer(v as i128)
    }

    fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl CostScalar for BigRational {
    type Field = BigRational;

    fn to_field(&self) -> BigRational {
        self.clone()
    }

    fn ratio(num: &BigRational, den: u64) -> BigRational {
        num / BigRational::from_integer(BigInt::from(den))
    }
}

impl Field for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_count(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                if self.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

/// A field value extended with signed infinities.
///
/// Variant order gives `MinusInf < Finite(_) < PlusInf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<T> {
    MinusInf,
    Finite(T),
    PlusInf,
}

impl<T> Extended<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn into_finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl<T: Ord> Extended<T> {
    /// Compare against a plain finite value.
    pub fn cmp_finite(&self, other: &T) -> Ordering {
        match self {
            Extended::MinusInf => Ordering::Less,
            Extended::Finite(v) => v.cmp(other),
            Extended::PlusInf => Ordering::Greater,
        }
    }
}

impl<T> From<T> for Extended<T> {
    fn from(v: T) -> Self {
        Extended::Finite(v)
    }
}

impl<T: Display> Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::MinusInf => f.write_str("-inf"),
            Extended::Finite(v) => v.fmt(f),
            Extended::PlusInf => f.write_str("inf"),
        }
    }
}

impl<T: FromStr> FromStr for Extended<T> {
    type Err = T::Err;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(Extended::PlusInf),
            "-inf" => Ok(Extended::MinusInf),
            other => other.parse().map(Extended::Finite),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_order() {
        let a: Extended<Rational> = Extended::MinusInf;
        let b = Extended::Finite(Rational::new(-7, 2));
        let c = Extended::Finite(Rational::from_integer(1_000_000));
        let d = Extended::PlusInf;
        assert!(a < b && b < c && c < d);
    }

    #[test]
    fn extended_text() {
        for s in ["inf", "-inf", "3/4", "-5"] {
            let v: Extended<Rational> = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
    }

    #[test]
    fn int_ratio_is_reduced() {
        assert_eq!(i64::ratio(&6, 4), Rational::new(3, 2));
        assert_eq!(Rational::ratio(&Rational::new(3, 2), 3), Rational::new(1, 2));
        let big = BigRational::ratio(&BigRational::from_int(9), 6);
        assert_eq!(big.to_string(), "3/2");
    }
}
