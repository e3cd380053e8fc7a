use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph shape mismatch: {0}")]
    Shape(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node index {index} out of range for graph with {size} nodes")]
    NodeOutOfRange { index: usize, size: usize },

    #[error("node {0} has already been rejected")]
    AlreadyRejected(usize),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("probability {value} outside {range}")]
    Probability { value: f64, range: &'static str },

    #[error("invalid information weights: {0}")]
    InvalidWeights(String),

    #[error("root bracket failed for hypothesis {index}: {reason}")]
    Bracket { index: usize, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
