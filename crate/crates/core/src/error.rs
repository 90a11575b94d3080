use thiserror::Error;

/// Errors produced by the cloning toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation (index range,
    /// dimension, normalization, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested combination of fidelity and amplitudes admits no cloner.
    #[error("infeasible point: square-root argument {discriminant:e} is negative")]
    Infeasible { discriminant: f64 },

    /// An iterative solver stopped without meeting its tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:e}, best objective {best:.12})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        best: f64,
        best_iterate: Vec<f64>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
