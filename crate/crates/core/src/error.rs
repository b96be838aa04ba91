use thiserror::Error;

/// Errors surfaced by the protocol library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent inputs (arity mismatch, out-of-range parameter, parse failure).
    #[error("input error: {0}")]
    Input(String),

    /// A party touched a register it does not own.
    #[error("locality violation: {0}")]
    Locality(String),

    /// API misuse that is not an input-data problem (e.g. sending a register to its own owner).
    #[error("usage error: {0}")]
    Usage(String),

    /// The requested simulation exceeds the dense-statevector ceiling.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A table split was requested for a constant spectrum; callers must short-circuit first.
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity(_) => 3,
            _ => 1,
        }
    }
}
