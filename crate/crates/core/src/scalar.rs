//! Real values carried under one of two arithmetic backends.
//!
//! An exact value is an arbitrary-precision rational; a float value is an
//! `f64`. Binary operations stay exact only when both operands are exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{QsError, Result};

pub type Rational = BigRational;

/// Which arithmetic produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn combine(self, other: Backend) -> Backend {
        if self == Backend::Exact && other == Backend::Exact {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn zero_like(backend: Backend) -> Scalar {
        match backend {
            Backend::Exact => Scalar::Exact(Rational::zero()),
            Backend::Float => Scalar::Float(0.0),
        }
    }

    pub fn one_like(backend: Backend) -> Scalar {
        match backend {
            Backend::Exact => Scalar::Exact(Rational::one()),
            Backend::Float => Scalar::Float(1.0),
        }
    }

    pub fn ratio(numer: i64, denom: i64) -> Scalar {
        Scalar::Exact(Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn integer(n: i64) -> Scalar {
        Scalar::Exact(Rational::from_integer(BigInt::from(n)))
    }

    /// Exact rational with the same value as `x` (every finite `f64` is a
    /// dyadic rational).
    pub fn exact_from_f64(x: f64) -> Result<Scalar> {
        Rational::from_float(x)
            .map(Scalar::Exact)
            .ok_or_else(|| QsError::ParseNumber(x.to_string()))
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Converts to the float backend, leaving float values untouched.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    fn binary(
        &self,
        rhs: &Scalar,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => Scalar::Float(float(self.to_f64(), rhs.to_f64())),
        }
    }
}

/// Nearest `f64` to a rational, robust to numerators and denominators that
/// individually overflow `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift = (n - d) - 60;
    let scaled = if shift > 0 {
        Rational::new(r.numer().clone(), r.denom().clone() << (shift as usize))
    } else {
        Rational::new(r.numer().clone() << ((-shift) as usize), r.denom().clone())
    };
    let int = scaled.to_integer().to_f64().unwrap_or(f64::NAN);
    int * 2f64.powi(shift as i32)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

macro_rules! scalar_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.binary(rhs, |a, b| a $op b, |a, b| a $op b)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

scalar_op!(Add, add, +);
scalar_op!(Sub, sub, -);
scalar_op!(Mul, mul, *);
scalar_op!(Div, div, /);

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", r),
            Scalar::Float(x) => write!(f, "{}", x),
        }
    }
}

/// Parses `"p/q"` and integer strings as exact rationals and anything with a
/// decimal point or exponent as a float.
impl FromStr for Scalar {
    type Err = QsError;

    fn from_str(s: &str) -> Result<Scalar> {
        let t = s.trim();
        let bad = || QsError::ParseNumber(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Scalar::Exact(Rational::new(n, d)));
        }
        if let Ok(n) = t.parse::<BigInt>() {
            return Ok(Scalar::Exact(Rational::from_integer(n)));
        }
        let x: f64 = t.parse().map_err(|_| bad())?;
        if !x.is_finite() {
            return Err(bad());
        }
        Ok(Scalar::Float(x))
    }
}

/// Parses a comma-separated list of scalars.
pub fn parse_list(s: &str) -> Result<Vec<Scalar>> {
    s.split(',').map(str::parse).collect()
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&r.to_string()),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Scalar, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a rational string such as \"1/3\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Float(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Float(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Float(v as f64))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_backends() {
        assert_eq!("1/3".parse::<Scalar>().unwrap(), Scalar::ratio(1, 3));
        assert!("1/3".parse::<Scalar>().unwrap().is_exact());
        assert!("2".parse::<Scalar>().unwrap().is_exact());
        let f = "0.2".parse::<Scalar>().unwrap();
        assert_eq!(f.backend(), Backend::Float);
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("nan".parse::<Scalar>().is_err());
    }

    #[test]
    fn mixed_arithmetic_degrades_to_float() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::Float(0.5);
        assert_eq!((&a + &b).backend(), Backend::Float);
        assert_eq!((&a + &a).backend(), Backend::Exact);
        assert_eq!(&a * &Scalar::integer(3), Scalar::integer(1));
    }

    #[test]
    fn huge_rationals_convert_to_f64() {
        let big = BigInt::from(3u32).pow(2000);
        let r = Rational::new(big.clone(), big * BigInt::from(4));
        assert_eq!(rational_to_f64(&r), 0.25);
    }

    #[test]
    fn serde_round_trip() {
        let v = vec![Scalar::ratio(1, 3), Scalar::Float(0.25)];
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["1/3",0.25]"#);
        let back: Vec<Scalar> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(back[0].is_exact());
    }
}
