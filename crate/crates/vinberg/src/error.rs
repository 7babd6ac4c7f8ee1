use thiserror::Error;

/// Errors raised by samplers, evaluators and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("point outside the domain: {0}")]
    Domain(String),
    #[error("argument on a branch cut: {0}")]
    BranchCut(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("failed to converge: {0}")]
    Convergence(String),
    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;
