use marc_core::ProbError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RateError {
    #[error(transparent)]
    Prob(#[from] ProbError),

    #[error("input distribution does not factorize: factor {factor} is violated")]
    Factorization { factor: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, RateError>;
