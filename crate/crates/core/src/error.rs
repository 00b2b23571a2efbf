use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong dimensions, out-of-range indices, non-bijective maps.
    #[error("structural error: {0}")]
    Structural(String),
    /// A configured size bound was exceeded.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    /// The inputs are well formed but an operation's precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A chart computation left the chart domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numeric quantity was not finite or not positive where required.
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}
