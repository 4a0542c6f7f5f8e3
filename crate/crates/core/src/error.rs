use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Invalid configuration or argument.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A point outside the domain of a function (on a chamber wall, nonpositive coordinate...).
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative solver hit its iteration cap.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// A vanishing factor in a denominator.
    #[error("pole encountered: {0}")]
    Pole(String),
    /// Monte Carlo envelope too poor to be useful.
    #[error("sampler acceptance too low: {0}")]
    LowAcceptance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
