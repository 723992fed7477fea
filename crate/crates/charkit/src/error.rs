//! Crate-wide error type.

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A vector or matrix had the wrong length for the operation.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A configuration value violates its documented constraints.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Training produced a non-finite mean squared error.
    #[error("training diverged at epoch {epoch}: mean squared error is not finite")]
    Divergence { epoch: usize },

    /// The two-scalar covariance is not symmetric positive definite.
    #[error("covariance alpha={alpha}, beta={beta}, dim={dim} is not positive definite")]
    NotPositiveDefinite { alpha: f64, beta: f64, dim: usize },

    /// An operation that averages over samples received none.
    #[error("empty sample subset")]
    EmptySubset,

    /// No column of the image can carry a cut score.
    #[error("no valid cut columns")]
    NoValidColumns,

    /// The image is too narrow to segment.
    #[error("image is {width} columns wide, need at least {min}")]
    TooNarrow { width: usize, min: usize },

    /// A binary file or text header could not be decoded.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// Pixel data violates the binary-image contract.
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
