use marc_rates::RateError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FadingError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid fading parameters: {0}")]
    InvalidParams(String),

    #[error("expected {expected} fading, got {got}")]
    WrongKind { expected: String, got: String },

    #[error(transparent)]
    Rates(#[from] RateError),
}

pub type Result<T> = std::result::Result<T, FadingError>;
