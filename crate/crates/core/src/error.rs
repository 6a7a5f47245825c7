//! Error type shared by the whole crate.

/// Errors reported by the library.
///
/// `Contract` marks a violated precondition (the caller handed us something
/// the operation is not defined for), `Range` a value outside the supported
/// magnitude, `Parse` a malformed textual input, and `Format` a structurally
/// invalid certificate document.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("certificate format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
