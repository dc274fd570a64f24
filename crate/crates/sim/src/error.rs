use marc_core::ProbError;
use marc_fading::FadingError;
use marc_rates::RateError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{table} needs {size} entries, above the limit of {limit}")]
    Budget {
        table: String,
        size: u128,
        limit: u128,
    },
    #[error("transmit power on input {input} is {power}, above the limit {limit}")]
    Power {
        input: usize,
        power: f64,
        limit: f64,
    },
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Rates(#[from] RateError),
    #[error(transparent)]
    Fading(#[from] FadingError),
}

pub type Result<T> = std::result::Result<T, SimError>;
