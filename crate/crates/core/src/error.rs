use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid radix sequence: {0}")]
    InvalidRadix(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("digit {digit} at position {position} not below radix {radix}")]
    InvalidDigit {
        position: usize,
        digit: usize,
        radix: usize,
    },

    #[error("depth {requested} exceeds available depth {available}")]
    DepthExceeded { requested: usize, available: usize },

    #[error("unsupported norm exponent {0}")]
    UnsupportedNorm(f64),

    #[error("cannot coarsen a depth-{from} function to depth {to}")]
    CannotCoarsen { from: usize, to: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("functions live on different radix systems")]
    RadixMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid atom at position {index}: {reason}")]
    InvalidAtom { index: usize, reason: String },

    #[error("invalid checkpoint {0}: checkpoints must be at least 1")]
    InvalidCheckpoint(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("identity violated: {name} (residual {residual:e})")]
    IdentityViolated { name: String, residual: f64 },
}
