//! Scalar backends for the direct recurrence's coefficient and probability updates.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::fraction_to_f64;

/// The handful of operations the direct recurrence needs.
pub trait Field {
    type Value: Clone + std::fmt::Debug;

    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    /// `a * num / den`.
    fn mul_ratio(&self, a: &Self::Value, num: u64, den: u64) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn to_f64(&self, a: &Self::Value) -> f64;
}

/// IEEE binary64.
#[derive(Debug, Clone, Copy, Default)]
pub struct Double;

impl Field for Double {
    type Value = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn mul_ratio(&self, a: &f64, num: u64, den: u64) -> f64 {
        a * (num as f64 / den as f64)
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn to_f64(&self, a: &f64) -> f64 {
        *a
    }
}

/// Binary fixed point with `bits` fractional bits; values are `raw / 2^bits`.
///
/// Every quantity in the direct recurrence is a probability in `[0, 1]`, so an
/// absolute-precision format loses nothing a floating exponent would keep.
#[derive(Debug, Clone, Copy)]
pub struct FixedPoint {
    pub bits: u32,
}

impl Field for FixedPoint {
    type Value = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }
    fn mul_ratio(&self, a: &BigInt, num: u64, den: u64) -> BigInt {
        a * num / den
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn to_f64(&self, a: &BigInt) -> f64 {
        let mag = fraction_to_f64(a.magnitude(), &(BigUint::one() << self.bits));
        if a.sign() == num_bigint::Sign::Minus {
            -mag
        } else {
            mag
        }
    }
}

/// Exact rationals; used to check the other two.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactField;

impl Field for ExactField {
    type Value = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn mul_ratio(&self, a: &BigRational, num: u64, den: u64) -> BigRational {
        a * BigRational::new(num.into(), den.into())
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn to_f64(&self, a: &BigRational) -> f64 {
        a.to_f64().unwrap_or(f64::NAN)
    }
}
