use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet needs at least two letters, got {0}")]
    AlphabetTooSmall(usize),
    #[error("duplicate letter {:?} in alphabet", *.0 as char)]
    DuplicateLetter(u8),
    #[error("unknown alphabet preset {0:?}")]
    UnknownAlphabet(String),
    #[error("letter {:?} is not in the alphabet", *.0 as char)]
    ForeignLetter(u8),
    #[error("q-gram table needs {required} entries, budget is {budget}")]
    BudgetExceeded { required: String, budget: usize },
    #[error("threshold k={k} must be smaller than pattern length m={m}")]
    ThresholdTooLarge { k: usize, m: usize },
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("gram length q={q} must satisfy 1 <= q < m={m}")]
    BadGramLength { q: usize, m: usize },
    #[error("rotation {i} out of range for pattern of length {m}")]
    RotationOutOfRange { i: usize, m: usize },
    #[error("invalid parameters: {0}")]
    InvalidPlan(String),
    #[error("input too large for the brute-force oracle: {0}")]
    OracleScale(String),
    #[error("malformed FASTA: {0}")]
    Fasta(String),
    #[error("malformed index file: {0}")]
    IndexFormat(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}
