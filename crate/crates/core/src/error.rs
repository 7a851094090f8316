use thiserror::Error;

/// Errors raised by the analytic, numeric and stochastic pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("divergent integral: term t^{power} with rate {rate} does not decay")]
    Divergent { power: u32, rate: String },
    #[error("hypergeometric series has a pole: c = {0}")]
    HypergeometricPole(i64),
    #[error("operation requires a finite filter bandwidth")]
    RequiresFilter,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
