use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed inconsistent shapes, labels or rings.
    #[error("usage error: {0}")]
    Usage(String),
    /// The field or run configuration cannot support the request.
    #[error("configuration error: {0}")]
    Config(String),
    /// A ring specification violates its invariants.
    #[error("ring spec error: {0}")]
    Spec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
