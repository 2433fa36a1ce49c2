use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("edge {0} is a loop and cannot be contracted")]
    LoopContraction(usize),
    #[error("refusing to run: {0} (override the size guard to force)")]
    SizeGuard(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
