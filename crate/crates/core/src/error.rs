use thiserror::Error;

/// Errors raised by the linear algebra kernels, solvers and condition checks.
#[derive(Debug, Error)]
pub enum AveError {
    #[error("matrix is numerically singular (pivot {pivot:.3e} at step {step})")]
    SingularMatrix { step: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("{what} did not converge within {iterations} iterations")]
    ConvergenceFailure { what: &'static str, iterations: usize },

    #[error("zero diagonal entry at index {index}")]
    ZeroDiagonal { index: usize },

    #[error("right-hand side has zero norm; relative residual undefined")]
    ZeroRhs,

    #[error("matrix is not lower triangular (entry ({row}, {col}) is nonzero)")]
    NotLowerTriangular { row: usize, col: usize },

    #[error("implicit iteration matrix is singular: {0}")]
    Breakdown(String),

    #[error("problem too large for sign enumeration: n = {n} (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, AveError>;
