use thiserror::Error;

/// Errors raised by the library. Input problems and internal contract
/// violations are kept apart so the CLI can map them to exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("not gentle: {}", .0.join("; "))]
    NotGentle(Vec<String>),
    #[error("infinite-dimensional algebra: {0}")]
    Infinite(String),
    #[error("invalid string: {}", .0.join("; "))]
    InvalidString(Vec<String>),
    #[error("invalid dissection: {0}")]
    Dissection(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("d^2 != 0: {0}")]
    NotComplex(String),
    #[error("morphism not closed")]
    NotClosed,
    #[error("thread condition violated: {0}")]
    Thread(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(format!("{e} (line {}, column {})", e.line(), e.column()))
    }
}
