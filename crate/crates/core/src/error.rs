use thiserror::Error;

/// Crate-wide error type.
///
/// The three variants map onto distinct failure classes so that callers
/// (notably the CLI) can assign exit codes without string matching:
/// `Parse` for malformed input, `Precondition` for refused calls, and
/// `Invariant` for violations of properties the library promises to hold.
/// An `Invariant` error coming out of a verified construction is a
/// falsification candidate and should never be swallowed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
