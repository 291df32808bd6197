//! Scalar traits shared by the exact and floating-point halves of the crate.
//!
//! Exact code is generic over [`Int`] (implemented for `i64`, `i128` and
//! `BigInt`); root finding is generic over [`Real`] (`f32`, `f64`).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed, ToPrimitive};

/// Exact signed integer scalar.
pub trait Int:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + FromStr
    + Default
    + num_integer::Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(v: &BigInt) -> Option<Self>;

    fn from_small(v: i64) -> Self {
        Self::from_i64(v).expect("small integer fits every Int type")
    }
}

impl Int for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
}

impl Int for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

impl Int for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

/// Floating-point scalar for root finding.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + Default + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Natural log of |x|, valid far beyond the `f64` range. Returns `-inf` for 0.
pub fn ln_abs(x: &BigInt) -> f64 {
    if x.sign() == Sign::NoSign {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Base-2 log of |x|, `-inf` for 0.
pub fn log2_abs(x: &BigInt) -> f64 {
    ln_abs(x) / std::f64::consts::LN_2
}

/// Shorthand for converting a small literal into any [`Int`].
pub fn int<T: Int>(v: i64) -> T {
    T::from_small(v)
}
