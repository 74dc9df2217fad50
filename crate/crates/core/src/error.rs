use thiserror::Error;

/// Errors raised by the library. Verification failures are not errors: they
/// are reported as data inside [`crate::report::Report`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("search cap exceeded: {what} needs {needed} candidates, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },

    #[error("ring {0} is not enumerable")]
    NotEnumerable(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate form: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no split unit in {0}")]
    NoSplitUnit(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn malformed<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Malformed(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
