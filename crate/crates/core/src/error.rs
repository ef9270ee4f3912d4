use thiserror::Error;

/// Errors raised by the toolkit. Every variant carries a human-readable
/// description; the CLI maps them onto structured report entries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported family: {0}")]
    Unsupported(String),
    #[error("sampling failure: {0}")]
    SamplingFailure(String),
    #[error("contradiction: {0}")]
    Contradiction(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
