use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// A real floating-point scalar of selectable precision.
///
/// Values remember their own precision; binary operations round to the
/// larger of the two operand precisions, so literals from [`num_traits::One`]
/// and friends never degrade a computation. Create working constants with the
/// `*_prec` constructors.
pub trait RealScalar: Clone + Num + Neg<Output = Self> + PartialOrd + Debug + Send + Sync {
    fn precision(&self) -> usize;
    fn with_precision(&self, prec: usize) -> Self;
    fn from_i64_prec(v: i64, prec: usize) -> Self;
    fn from_bigint_prec(v: &BigInt, prec: usize) -> Self;
    fn from_f64_prec(v: f64, prec: usize) -> Self;
    /// `2^e`
    fn exp2_prec(e: i64, prec: usize) -> Self;
    fn pi_prec(prec: usize) -> Self;

    fn sqrt(&self) -> Self;
    fn cos(&self) -> Self;
    fn sin(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact value as a dyadic rational.
    fn to_rational(&self) -> BigRational;

    fn from_rational_prec(v: &BigRational, prec: usize) -> Self {
        Self::from_bigint_prec(v.numer(), prec) / Self::from_bigint_prec(v.denom(), prec)
    }

    /// `log2 |x|`, `-inf` at zero. Accurate to well under one bit.
    fn log2_abs(&self) -> f64 {
        let r = self.to_rational();
        if r.numer().bits() == 0 {
            return f64::NEG_INFINITY;
        }
        let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
        let scaled = if shift >= 0 {
            r / BigRational::from_integer(BigInt::from(1) << shift as usize)
        } else {
            r * BigRational::from_integer(BigInt::from(1) << (-shift) as usize)
        };
        scaled.to_f64().unwrap_or(1.0).abs().log2() + shift as f64
    }
}

impl RealScalar for f64 {
    fn precision(&self) -> usize {
        53
    }
    fn with_precision(&self, _prec: usize) -> Self {
        *self
    }
    fn from_i64_prec(v: i64, _prec: usize) -> Self {
        v as f64
    }
    fn from_bigint_prec(v: &BigInt, _prec: usize) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn from_f64_prec(v: f64, _prec: usize) -> Self {
        v
    }
    fn exp2_prec(e: i64, _prec: usize) -> Self {
        (e as f64).exp2()
    }
    fn pi_prec(_prec: usize) -> Self {
        std::f64::consts::PI
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_default()
    }
    fn from_rational_prec(v: &BigRational, _prec: usize) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn log2_abs(&self) -> f64 {
        f64::abs(*self).log2()
    }
}

/// Modulus of a complex number over any [`RealScalar`].
pub fn cabs<R: RealScalar>(z: &Complex<R>) -> R {
    (z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).sqrt()
}

/// `e^{i theta}`
pub fn cis<R: RealScalar>(theta: &R) -> Complex<R> {
    Complex::new(theta.cos(), theta.sin())
}
