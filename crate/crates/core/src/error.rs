use thiserror::Error;

/// Errors produced by the pricers, the moment computations and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Adaptive quadrature ran out of subdivisions. Carries the best estimate
    /// reached and its error bound.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    #[error("square-root mean fit failed for {0}")]
    FitFailure(String),

    #[error("outside the domain of the formula: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("non-finite value on path {path} at step {step}")]
    NonFinitePath { path: usize, step: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by the caller's inputs rather than by numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
