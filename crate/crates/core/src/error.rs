//! Error types shared across the crate.

use thiserror::Error;

/// Coarse classification used by callers that map errors to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input data (files, labels, graphs).
    Data,
    /// Numerical failures: divergent parameters, non-convergence, singular systems.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate edge between '{a}' and '{b}'")]
    DuplicateEdge { a: String, b: String },

    #[error("duplicate node label '{label}'")]
    DuplicateLabel { label: String },

    #[error("unknown node label '{label}'")]
    UnknownLabel { label: String },

    #[error("unknown layer index {index} (graph has {count} layers)")]
    UnknownLayer { index: usize, count: usize },

    #[error("layer '{name}' has no nodes")]
    EmptyLayer { name: String },

    #[error("projection target and via layers must differ")]
    ProjectionSameLayer,

    #[error("negative or non-finite weight {value}")]
    InvalidWeight { value: f64 },

    #[error("layer weights cover {got} layers but the matrix has {expected}")]
    WeightShapeMismatch { got: usize, expected: usize },

    #[error("alpha {alpha} is at or beyond the convergence bound 1/lambda = {max_alpha}")]
    AlphaBound { alpha: f64, max_alpha: f64 },

    #[error("invalid centrality parameters: {reason}")]
    InvalidParams { reason: String },

    #[error(
        "eigensolver did not converge after {iterations} iterations (residual {residual:.3e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("linear solve failed: matrix is singular or ill-conditioned")]
    SingularSystem,

    #[error(
        "degenerate null model: total path count is zero (graph too sparse or alpha too small)"
    )]
    DegenerateNullModel,

    #[error("partitions cover different node sets: {detail}")]
    NodeSetMismatch { detail: String },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("unknown builtin dataset '{name}' (available: {available})")]
    UnknownBuiltin { name: String, available: String },

    #[error("invalid alpha grid: {reason}")]
    InvalidGrid { reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Classify errors for exit-code mapping.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::AlphaBound { .. }
            | Error::NoConvergence { .. }
            | Error::SingularSystem
            | Error::DegenerateNullModel
            | Error::InvalidParams { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Data,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
