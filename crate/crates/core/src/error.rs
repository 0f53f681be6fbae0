use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("precision cap of {cap} guard bits exceeded while {what}")]
    PrecisionCap { cap: u32, what: String },
    #[error("cache integrity error: {0}")]
    Integrity(String),
    #[error("cache does not match the requested source: {0}")]
    SpecMismatch(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn cert(msg: impl Into<String>) -> Self {
        Error::Certification(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
