use thiserror::Error;

/// Library-wide error type.
///
/// The variants map onto how failures are reported at the CLI boundary:
/// `Input` for bad call arguments (usage), `Data` for malformed or
/// inconsistent input data, `Invariant` for conditions that should be
/// unreachable when inputs are well formed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
