use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// Malformed rotation system or dart structure.
    #[error("structural error: {0}")]
    Structural(String),
    /// Input outside an operation's domain (disconnected graph, bad root, ...).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a valid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid input: {0}")]
    Input(String),
    /// A guaranteed property failed to hold; signals a bug.
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// Process exit code: 1 for unreadable input, 2 for invariant failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
