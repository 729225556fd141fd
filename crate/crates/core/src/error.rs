use thiserror::Error;

#[derive(Debug, Error)]
pub enum BmooError {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("input has dimension {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("input out of bounds at coordinate {index}: {value}")]
    OutOfBounds { index: usize, value: f64 },
    #[error("evaluation of `{problem}` produced a non-finite output")]
    NonFinite { problem: String },
    #[error("covariance factorization failed even with the largest nugget")]
    Factorization,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("particle system degenerated: {0}")]
    Degenerate(String),
    #[error("metadata: {0}")]
    Metadata(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, BmooError>;
