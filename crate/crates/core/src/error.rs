use thiserror::Error;

/// Errors raised by model construction, grid setup and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("point ({r}, {z}) lies outside the computational domain")]
    OutsideDomain { r: f64, z: f64 },

    #[error("linear solve did not converge after {iterations} iterations (residual {residual:e})")]
    LinearSolve { iterations: usize, residual: f64 },

    #[error("monotone iteration did not converge within {iterations} steps (last update {last_delta:e}, residual {last_residual:e})")]
    NonConvergence {
        iterations: usize,
        last_delta: f64,
        last_residual: f64,
        history: Vec<(f64, f64)>,
    },

    #[error("monotonicity violated at step {step}: node {node} moved by {excess:e} against the iteration direction")]
    Monotonicity { step: usize, node: usize, excess: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
