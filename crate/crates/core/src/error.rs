use alloc::string::String;

/// Errors raised by the computational kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("precision exhausted on branch {}: need terms below t^{needed}, known below t^{available}", .branch + 1)]
    PrecisionExhausted {
        branch: usize,
        needed: i64,
        available: i64,
    },
    #[error("value on branch {} is not certified below precision {precision}", .branch + 1)]
    UncertifiedValue { branch: usize, precision: i64 },
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("numerical semigroup generators have gcd {0}, the conductor is infinite")]
    InfiniteConductor(u64),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("operation requires a plane curve (n = 2), found n = {0}")]
    NotPlane(usize),
    #[error("operation requires r = 2 branches, found {0}")]
    UnsupportedRank(usize),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("leading coefficient is not invertible in the coefficient field")]
    NonInvertibleCoefficient,
}

pub type Result<T> = core::result::Result<T, Error>;
