//! Exact arithmetic: rationals, polynomials, cyclotomic fields and
//! fraction-free linear solves.

pub mod cyclotomic;
pub mod linalg;
pub mod poly;
pub mod rational;

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::Num;

/// An exact commutative ring or field usable as a coefficient domain.
///
/// Division is only ever requested when the divisor is known to divide
/// (by a field element, or exactly in an integral domain).
pub trait ExactScalar: Clone + Num + Neg<Output = Self> + Debug {}

impl<T> ExactScalar for T where T: Clone + Num + Neg<Output = T> + Debug {}

/// Size in bits of an exact value, used as a pivoting heuristic.
pub trait BitSize {
    fn bit_size(&self) -> u64;
}

impl BitSize for num_bigint::BigInt {
    fn bit_size(&self) -> u64 {
        self.bits()
    }
}

impl BitSize for i64 {
    fn bit_size(&self) -> u64 {
        u64::from(64 - self.unsigned_abs().leading_zeros())
    }
}

impl BitSize for i128 {
    fn bit_size(&self) -> u64 {
        u64::from(128 - self.unsigned_abs().leading_zeros())
    }
}

impl<T: BitSize + Clone + num_integer::Integer> BitSize for num_rational::Ratio<T> {
    fn bit_size(&self) -> u64 {
        self.numer().bit_size() + self.denom().bit_size()
    }
}
