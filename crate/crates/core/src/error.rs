use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit codes: `InvalidInput` and `Rejected`
/// exit with 2, `Internal` with 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A CM field description that fails validation.
    #[error("field rejected: {0}")]
    Rejected(String),

    /// A closed-form evaluation whose hypotheses do not hold for the input.
    #[error("inapplicable: {0}")]
    Inapplicable(String),

    /// A computed quantity contradicts a proven identity (route disagreement,
    /// violated bound, missing unit value). Always a bug or corrupted input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail_input {
    ($($arg:tt)*) => {
        return Err($crate::error::Error::InvalidInput(format!($($arg)*)))
    };
}

macro_rules! bail_internal {
    ($($arg:tt)*) => {
        return Err($crate::error::Error::Internal(format!($($arg)*)))
    };
}

pub(crate) use bail_input;
pub(crate) use bail_internal;
