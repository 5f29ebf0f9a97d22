//! Scalars that stay exact when their inputs are rational.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A real coordinate on the unit interval, exact or floating.
#[derive(Clone, Debug, PartialEq)]
pub enum Coord {
    Exact(BigRational),
    Float(f64),
}

impl Coord {
    pub fn zero() -> Self {
        Coord::Exact(BigRational::zero())
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Coord::Exact(BigRational::new(BigInt::from(p), BigInt::from(q))).frac()
    }

    pub fn float(x: f64) -> Self {
        Coord::Float(x).frac()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coord::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coord::Exact(r) => rational_to_f64(r),
            Coord::Float(x) => *x,
        }
    }

    /// Representative in [0, 1).
    pub fn frac(&self) -> Self {
        match self {
            Coord::Exact(r) => Coord::Exact(frac_rational(r)),
            Coord::Float(x) => Coord::Float(frac_f64(*x)),
        }
    }

    pub fn add(&self, other: &Coord) -> Coord {
        match (self, other) {
            (Coord::Exact(x), Coord::Exact(y)) => Coord::Exact(frac_rational(&(x + y))),
            _ => Coord::Float(frac_f64(self.to_f64() + other.to_f64())),
        }
    }

    pub fn neg(&self) -> Coord {
        match self {
            Coord::Exact(x) => Coord::Exact(frac_rational(&-x)),
            Coord::Float(x) => Coord::Float(frac_f64(-x)),
        }
    }

    pub fn sub(&self, other: &Coord) -> Coord {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: i64) -> Coord {
        match self {
            Coord::Exact(x) => Coord::Exact(frac_rational(&(x * BigInt::from(n)))),
            Coord::Float(x) => Coord::Float(frac_f64(*x * n as f64)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self.frac() {
            Coord::Exact(x) => x.is_zero(),
            Coord::Float(x) => x == 0.0,
        }
    }

    /// min(x, 1 - x) for the reduced representative.
    pub fn dist_to_integer(&self) -> Coord {
        match self.frac() {
            Coord::Exact(x) => {
                let y = BigRational::one() - &x;
                Coord::Exact(if x < y { x } else { y })
            }
            Coord::Float(x) => Coord::Float(x.min(1.0 - x)),
        }
    }

    /// Numerator and denominator of the reduced value when both fit in i128.
    pub fn as_i128_fraction(&self) -> Option<(i128, i128)> {
        match self.frac() {
            Coord::Exact(x) => Some((x.numer().to_i128()?, x.denom().to_i128()?)),
            Coord::Float(_) => None,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Exact(x) => write!(f, "{}", x),
            Coord::Float(x) => write!(f, "{}", x),
        }
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(|r| Coord::Exact(frac_rational(&r)))
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Coord::Exact(x) => s.serialize_str(&x.to_string()),
            Coord::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Coord;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string like \"3/7\" or \"0.25\", or a number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Coord, E> {
                v.parse().map_err(|e: Error| E::custom(e.to_string()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Coord, E> {
                Ok(Coord::float(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Coord, E> {
                Ok(Coord::ratio(v, 1))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Coord, E> {
                Ok(Coord::Exact(frac_rational(&BigRational::from_integer(BigInt::from(v)))))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn frac_f64(x: f64) -> f64 {
    let y = x - x.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

pub fn frac_rational(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let l = ln_rational_abs(x);
    let s = if x.is_negative() { -1.0 } else { 1.0 };
    s * l.exp()
}

/// Natural log of a positive big integer, accurate to double precision.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.sign() == Sign::Plus, "logarithm of a non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of |x| for non-zero x.
pub fn ln_rational_abs(x: &BigRational) -> f64 {
    ln_bigint(&x.numer().abs()) - ln_bigint(&x.denom().abs())
}

/// Parses "p/q", an integer, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {:?}", s));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, fr) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && fr.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(fr.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{}{}", int, fr);
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let d = num_traits::pow(BigInt::from(10), fr.len());
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("non-finite value {}", x)))
}
