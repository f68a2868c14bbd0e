use thiserror::Error;

/// Errors produced by game construction, enumeration and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An index, probability or parameter outside its admissible range.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A structure whose dimensions do not match the game it is used with.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The profile space (or graph) exceeds the configured enumeration cap.
    #[error("capacity exceeded: {what} has {requested} entries, cap is {cap}")]
    Capacity {
        what: &'static str,
        requested: u128,
        cap: u64,
    },

    /// A precondition of the requested computation does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
