use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed graph line, pattern spec, or similar unparseable input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Arguments that violate an operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exhaustive search refused to start or was cut off. Never a silent
    /// bound: the message says what was attempted and what would fit.
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
