use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of a mathematical operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input has the wrong shape or length.
    #[error("usage error: {0}")]
    Usage(String),

    /// A configuration is invalid. Reported before any simulation work starts.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A curve fit could not be performed or produced an unusable result.
    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
