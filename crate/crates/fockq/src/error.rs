use num_complex::Complex64;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum FockError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("symbol evaluation produced a non-finite value at z = {at}")]
    NonFiniteEval { at: Complex64 },

    #[error("quadrature rule failed validation: {0}")]
    QuadratureValidation(String),

    #[error("{context}: no convergence after {iterations} iterations (last = {last}, previous = {prev})")]
    NonConvergence {
        context: &'static str,
        iterations: usize,
        last: f64,
        prev: f64,
    },

    #[error("moment tail indicator {indicator:.3e} exceeds tolerance {tol:.3e}; increase the tail dimension M")]
    MomentTail { indicator: f64, tol: f64 },

    #[error("coherent state at |w|^2/(4t) = {lambda:.3} needs about {needed} basis levels, only {dim} configured")]
    CoherentTail {
        lambda: f64,
        needed: usize,
        dim: usize,
    },

    #[error("operation requires a radial symbol")]
    NonRadial,

    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),

    #[error("monotonicity assertion failed: {0}")]
    NonMonotone(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, FockError>;
