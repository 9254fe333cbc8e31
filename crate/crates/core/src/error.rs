use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid symbol {symbol} for alphabet size {q}")]
    InvalidSymbol { symbol: u32, q: u32 },
    #[error("infeasible code: {0}")]
    Infeasible(String),
    #[error("payload has {got} bits, code expects {expected}")]
    PayloadSize { expected: usize, got: usize },
    #[error("instance too large: {estimate} enumeration steps (limit {limit})")]
    TooLarge { estimate: u128, limit: u128 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
