use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("stale match for rule {0}")]
    StaleMatch(String),
    #[error("no match: {0}")]
    NoMatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("proof replay failed: {0}")]
    Replay(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
