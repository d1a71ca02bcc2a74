use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed pattern `{0}`: {1}")]
    Pattern(String, String),
    #[error("empty pattern set")]
    EmptyPatternSet,
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("vector length {found} does not match expected length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("n = {n} exceeds the oracle limit {limit}")]
    OracleLimit { n: usize, limit: usize },
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("malformed scheme document: {0}")]
    Document(String),
    #[error("pattern {0} is neither consecutive nor a single trailing dash")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
