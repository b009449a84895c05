use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Argument outside the domain of the operation.
    #[error("{0}")]
    Domain(String),
    /// Malformed or inconsistent input data.
    #[error("{0}")]
    Invalid(String),
    /// Input that the closed catalog does not cover.
    #[error("not in catalog: {0}")]
    Catalog(String),
    #[error("{what}: size {size} exceeds enumeration guard {limit}")]
    Guard { what: String, size: u128, limit: u128 },
    /// A search that is expected to succeed did not (e.g. no principal generator).
    #[error("{0}")]
    NotFound(String),
    /// An internal consistency check failed; this is a bug, not bad input.
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Invalid(_) => "invalid-input",
            Error::Catalog(_) => "catalog-gap",
            Error::Guard { .. } => "guard-exceeded",
            Error::NotFound(_) => "not-found",
            Error::Internal(_) => "internal",
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
