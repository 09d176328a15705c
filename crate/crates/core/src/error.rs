use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field modulus {0}: must be a prime with 3 < p < 2^31")]
    InvalidModulus(u64),

    #[error("curve y^2 = x^3 + {a}x + {b} is singular over GF({p})")]
    SingularCurve { a: u64, b: u64, p: u64 },

    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),

    #[error("function has a pole at the requested point")]
    Pole,

    #[error("linear system has no solution")]
    NoSolution,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("prime too small: {reason}; use a prime p >= {required}")]
    PrimeTooSmall { required: u64, reason: String },

    #[error("sampling failed to stabilise ({0}); increase p")]
    SamplingFailed(String),

    #[error("matrix of {rows}x{cols} entries exceeds the limit of {limit} entries")]
    TooLarge { rows: usize, cols: usize, limit: usize },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
