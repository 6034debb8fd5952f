use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid network: {0}")]
    Network(String),

    #[error("invalid cost function on edge {edge}: {reason}")]
    Cost { edge: String, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("rank-one update has a zero denominator")]
    ZeroPivot,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("pivot budget of {0} exceeded")]
    Budget(usize),

    #[error("demand {0} is outside the computed curve")]
    OutOfRange(String),

    #[error("oracle did not converge: {0}")]
    Convergence(String),

    #[error("unknown name: {0}")]
    Unknown(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
