use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must share an alternative count do not.
    #[error("dimension mismatch: expected {expected} alternatives, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("profile weights sum to {0}, expected 1")]
    WeightSum(String),

    /// An input exceeds a hard size guard of an exact algorithm.
    #[error("{what}: requested {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// Malformed input document; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    /// Integer fast paths cannot represent the profile weights.
    #[error("weights too fine for this solver: {0}")]
    Precision(String),

    #[error("linear program: {0}")]
    Lp(String),

    #[error("incompatible input: {0}")]
    Incompatible(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
