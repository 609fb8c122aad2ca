use thiserror::Error;

/// Errors raised by the verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument outside the documented domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured size, time or memory cap was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
