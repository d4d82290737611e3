use thiserror::Error;

/// Library-wide error type. Variants mirror the failure classes the
/// public operations can hit: bad caller input, evaluation outside an
/// operation's domain, numerical breakdown, violated cross-checks, and
/// sign/orientation choices that no candidate satisfies.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("no admissible sign convention: {0}")]
    Convention(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn numeric(msg: impl Into<String>) -> Error {
    Error::Numeric(msg.into())
}

pub(crate) fn consistency(msg: impl Into<String>) -> Error {
    Error::Consistency(msg.into())
}
