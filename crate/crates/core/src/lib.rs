//! Exact Baxter Q-operator engine for the integrable spin-(L-2)/2 XXZ chain at
//! the combinatorial point `eta = -(L-1) pi i / L`.
//!
//! The pipeline builds `Q(z)` over the rationals, moves its coefficients into
//! the Bethe-root variables `w` inside the cyclotomic field `Q(zeta_{2L})`,
//! and checks the energy identities exactly. A separate arbitrary-precision
//! root finder validates the exact results numerically.
//!
//! The algebraic core is generic over its scalar: polynomials, cyclotomic
//! numbers and fraction-free elimination work over any exact ring/field from
//! `num-traits`, and the root finder over any [`RealScalar`] (`f64` or
//! [`BigReal`]). The aliases below fix the concrete types the pipeline uses.

pub mod energy;
pub mod error;
pub mod exact;
pub mod json;
pub mod numeric;
pub mod params;
pub mod qop;
pub mod report;
pub mod roots;
pub mod suite;
pub mod wtransform;

pub use error::{Error, Result};
pub use exact::cyclotomic::{Cyclotomic, CyclotomicField};
pub use exact::poly::Polynomial;
pub use numeric::bigreal::BigReal;
pub use numeric::scalar::RealScalar;
pub use params::ChainParams;
pub use qop::QPolynomial;
pub use report::{CheckEntry, Residual, VerificationReport};

/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;
/// Polynomial with exact rational coefficients (ascending degree).
pub type RationalPolynomial = Polynomial<Rational>;
/// Element of `Q(zeta_n)` with rational coordinates.
pub type CyclotomicNumber = Cyclotomic<Rational>;
/// Shared handle to a rational cyclotomic field.
pub type RationalCyclotomicField = CyclotomicField<Rational>;
/// Complex number over the arbitrary-precision binary float.
pub type PrecisionComplex = num_complex::Complex<BigReal>;

/// Working precision used when the caller does not choose one.
pub const DEFAULT_PRECISION_BITS: usize = 256;
