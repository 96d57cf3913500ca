use thiserror::Error;

/// Errors raised by grid construction, operators and checks.
#[derive(Debug, Error)]
pub enum FracError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite value at node {index}")]
    NonFinite { index: usize },
    #[error("grids do not match")]
    GridMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FracError>;

impl FracError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        FracError::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        FracError::Precondition(msg.into())
    }
}
