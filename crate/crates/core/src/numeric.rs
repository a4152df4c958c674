//! Numeric tower: exact rationals and 64-bit floats behind one trait.
//!
//! Exact mode keeps the lower player's indifference comparisons exact, which
//! matters because indifference resolves to the weak candidate. Float mode is
//! for long games where rationals grow without bound.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational.
pub type Exact = BigRational;

/// Relative tolerance used by float mode for indifference and equality.
pub const FLOAT_REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Exact,
    Float,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NumericMode::Exact => "exact",
            NumericMode::Float => "float",
        })
    }
}

impl FromStr for NumericMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(NumericMode::Exact),
            "float" => Ok(NumericMode::Float),
            other => Err(Error::Format(format!("unknown numeric mode {other:?}"))),
        }
    }
}

/// A user-supplied scalar parameter: either an exact ratio (`"3/5"`, `"2"`)
/// or a decimal (`"0.3"`).
///
/// Decimals are never silently rationalized; asking for an exact value from a
/// decimal is an error.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Ratio(BigRational),
    Decimal(f64),
}

impl Number {
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Number::Ratio(BigRational::new(numer.into(), denom.into()))
    }

    pub fn decimal(value: f64) -> Self {
        Number::Decimal(value)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Ratio(r) => ToPrimitive::to_f64(r).unwrap_or(f64::NAN),
            Number::Decimal(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Ratio(_))
    }

    pub fn as_ratio(&self) -> Option<&BigRational> {
        match self {
            Number::Ratio(r) => Some(r),
            Number::Decimal(_) => None,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Ratio(r) => f.write_str(&encode_ratio(r)),
            Number::Decimal(v) => f.write_str(&encode_f64(*v)),
        }
    }
}

impl FromStr for Number {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') || (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit() || b == b'-')) {
            return parse_ratio(s).map(Number::Ratio);
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Number::Decimal)
            .ok_or_else(|| Error::Format(format!("cannot parse {s:?} as a ratio or decimal")))
    }
}

impl Serialize for Number {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Number {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Format(format!("cannot parse {s:?} as an exact ratio"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub(crate) fn encode_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shortest decimal that round-trips to the same `f64`.
pub(crate) fn encode_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Arithmetic the solver and analysis code are generic over.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: NumericMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(n: u64) -> Self;
    fn ratio(numer: u64, denom: u64) -> Self;
    fn from_number(n: &Number) -> Result<Self>;
    fn to_f64(&self) -> f64;

    /// `self > other`, beyond the float indifference band in float mode.
    fn exceeds(&self, other: &Self) -> bool;
    /// Equality, within the float tolerance in float mode.
    fn approx_eq(&self, other: &Self) -> bool;

    fn floor_u64(&self) -> u64;
    /// Whether the value is an integer (within tolerance in float mode).
    fn is_integral(&self) -> bool;

    fn powi(&self, exp: u64) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn encode(&self) -> String;
    fn decode(s: &str) -> Result<Self>;
}

fn float_band(a: f64, b: f64) -> f64 {
    FLOAT_REL_TOL * 1f64.max(a.abs()).max(b.abs())
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn ratio(numer: u64, denom: u64) -> Self {
        numer as f64 / denom as f64
    }
    fn from_number(n: &Number) -> Result<Self> {
        Ok(n.to_f64())
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exceeds(&self, other: &Self) -> bool {
        *self - *other > float_band(*self, *other)
    }
    fn approx_eq(&self, other: &Self) -> bool {
        (*self - *other).abs() <= float_band(*self, *other)
    }
    fn floor_u64(&self) -> u64 {
        self.floor().max(0.0) as u64
    }
    fn is_integral(&self) -> bool {
        (*self - self.round()).abs() <= float_band(*self, 0.0)
    }
    fn powi(&self, exp: u64) -> Self {
        f64::powf(*self, exp as f64)
    }
    fn encode(&self) -> String {
        encode_f64(*self)
    }
    fn decode(s: &str) -> Result<Self> {
        s.trim()
            .parse()
            .map_err(|_| Error::Format(format!("cannot parse {s:?} as a float")))
    }
}

impl Scalar for BigRational {
    const MODE: NumericMode = NumericMode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_u64(n: u64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn ratio(numer: u64, denom: u64) -> Self {
        BigRational::new(numer.into(), denom.into())
    }
    fn from_number(n: &Number) -> Result<Self> {
        match n {
            Number::Ratio(r) => Ok(r.clone()),
            Number::Decimal(v) => Err(Error::NotExact(format!(
                "decimal {v} given where exact mode needs a ratio such as \"3/5\""
            ))),
        }
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn exceeds(&self, other: &Self) -> bool {
        self > other
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn floor_u64(&self) -> u64 {
        if self.is_negative() {
            0
        } else {
            self.floor().to_integer().to_u64().unwrap_or(u64::MAX)
        }
    }
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
    fn encode(&self) -> String {
        encode_ratio(self)
    }
    fn decode(s: &str) -> Result<Self> {
        parse_ratio(s.trim())
    }
}
