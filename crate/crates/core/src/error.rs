use thiserror::Error;

use crate::fields::ExprError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {0} is outside 1..=3")]
    InvalidIndex(i64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("state is not normalized: norm = {0}")]
    NotNormalized(f64),

    #[error("state precondition violated: {0}")]
    StatePrecondition(String),

    #[error("invalid field configuration: {0}")]
    InvalidField(String),

    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("linear solver did not converge after {iterations} iterations (residual {residual:e})")]
    SolverNotConverged { iterations: usize, residual: f64 },

    #[error("eigensolver did not converge: final residual {final_residual:e} after {} iterations", history.len())]
    EigenNotConverged { final_residual: f64, history: Vec<f64> },

    #[error("packet left the admissible region at step {step}: {detail}")]
    BoundaryViolation { step: usize, detail: String },

    #[error("invalid convergence study: {0}")]
    InvalidConvergence(String),

    #[error("dense fallback limited to {limit} points, got {got}")]
    DenseTooLarge { limit: usize, got: usize },

    #[error("{0}")]
    Invalid(String),
}
