use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("singular matrix: rank {rank} < {size}")]
    SingularMatrix { rank: usize, size: usize },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("polynomial division left a nonzero remainder of degree {degree}")]
    NonzeroRemainder { degree: usize },

    #[error("invalid chain parameters: {0}")]
    InvalidParams(String),

    #[error("closed-form product factor vanishes at k={k}, j={j}")]
    ZeroProductFactor { k: usize, j: usize },

    #[error("equation count {found} does not match root count {expected}")]
    EquationCount { found: usize, expected: usize },

    #[error("Q(e^(-2 pi i/L)) vanishes; the w-variable normalisation is singular")]
    ZeroDenominator,

    #[error("sum of w_j is not real: {0}")]
    NotReal(String),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("linear ansatz fails for L={l}: slope differs from 2A + cos(2 pi/L) by {residual}")]
    SlopeInconsistency { l: u32, residual: String },

    #[error("closed form and linear system disagree for L={l}, N={n}")]
    MethodMismatch { l: u32, n: u32 },

    #[error("root finder did not converge after {iterations} sweeps (max correction ~2^{log2_correction:.1})")]
    NoConvergence {
        iterations: usize,
        log2_correction: f64,
    },

    #[error("point lies within 2^-{bits} of the Mobius pole")]
    PoleProximity { bits: usize },

    #[error("roots {0} and {1} coincide within tolerance")]
    CoincidentRoots(usize, usize),

    #[error("precision of {0} bits is below the minimum of {1}")]
    Precision(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}
