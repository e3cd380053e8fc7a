use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] isci_core::Error),

    #[error("invalid scenario: {0}")]
    Invalid(String),

    #[error("correlation matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("scenario JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("thread pool: {0}")]
    Pool(String),
}

pub type SimResult<T> = std::result::Result<T, SimError>;
