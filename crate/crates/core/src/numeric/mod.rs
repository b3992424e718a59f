//! Floating-point side: the scalar abstraction, an arbitrary-precision
//! binary float, and the complex embedding of cyclotomic numbers.

pub mod bigreal;
pub mod embed;
pub mod scalar;

pub use embed::{embed, embed_real_rational};
pub use scalar::{cabs, RealScalar};
