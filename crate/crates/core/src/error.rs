use thiserror::Error;

/// Errors raised by distribution construction and the information measures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbError {
    #[error("weights sum to {sum}, expected 1 within {tol}")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("weight at cell {cell} is {value}; weights must be finite and nonnegative")]
    InvalidWeight { cell: usize, value: f64 },

    #[error("shape mismatch: expected {expected} weights, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{0}` appears more than once")]
    DuplicateVariable(String),

    #[error("variable `{0}` has an empty alphabet")]
    EmptyAlphabet(String),

    #[error("symbol {symbol} out of range for `{variable}` (size {size})")]
    SymbolOutOfRange {
        variable: String,
        symbol: usize,
        size: usize,
    },

    #[error("sequence length {got} does not match expected length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("conditional row {row} sums to {sum}, expected 1")]
    RowNotNormalized { row: usize, sum: f64 },

    #[error("malformed factorization pattern: {0}")]
    MalformedPattern(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, ProbError>;
