//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A family or configuration parameter is outside its admissible domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Evaluation requested at a point where the quantity is undefined
    /// (e.g. a singular weight at an interval endpoint).
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// The requested integral does not exist (e.g. unit-weight moments on an
    /// unbounded interval, or NPC matrices without a truncation cutoff).
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// An iterative eigenvalue computation exceeded its iteration budget.
    #[error("eigensolver did not converge after {iterations} iterations: {context}")]
    NonConvergence { iterations: usize, context: String },

    /// A pivot collapsed during factorization.
    #[error("singular matrix at pivot {pivot}")]
    Singular { pivot: usize },

    /// Eigenvector matrix too ill-conditioned for a matrix-function evaluation.
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    /// Non-finite value produced while assembling a matrix entry.
    #[error("assembly failure at entry ({row}, {col}): {reason}")]
    Assembly {
        row: usize,
        col: usize,
        reason: String,
    },

    /// Mismatched vector/matrix dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Operation not supported for the given inputs.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
