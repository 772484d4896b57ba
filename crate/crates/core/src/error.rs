use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty word has no profile")]
    EmptyWord,
    #[error("alphabet size {0} is not supported (need 2 <= q <= 255)")]
    InvalidAlphabet(usize),
    #[error("symbol {symbol} out of range for alphabet size {q}")]
    SymbolOutOfRange { symbol: usize, q: u8 },
    #[error("alphabet mismatch: q={left} vs q={right}")]
    AlphabetMismatch { left: u8, right: u8 },
    #[error("operation requires a binary word (q=2), got q={0}")]
    NotBinary(u8),
    #[error("embedding count overflowed the 128-bit range")]
    Overflow,
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no closed-form characterization available: {0}")]
    NotCharacterized(String),
    #[error("budget exceeded: {required} > {budget} (raise with --budget)")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("cannot parse word {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
