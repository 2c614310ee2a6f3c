use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("scalar kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: String, got: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("rank over ℤ is not defined; use smith_normal_form")]
    IntegerRank,

    #[error("differentials do not compose to zero")]
    NonzeroComposite,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("subsets are not close")]
    NotClose,

    #[error("multidegree bound exceeded")]
    BoundExceeded,

    #[error("grading system inconsistent: {0}")]
    GradingInconsistent(String),

    #[error("product falls outside the distinguished span: {0}")]
    OutsideDistinguishedSpan(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
