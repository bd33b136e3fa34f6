use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{what} exceeds the supported range")]
    TooLarge { what: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    ForeignElement,
    #[error("block size s={s} is out of range (must satisfy 2 <= s <= {max})")]
    BadS { s: usize, max: usize },
    #[error("q_target={q} is out of range for {p} sets")]
    BadQ { q: usize, p: usize },
    #[error("invalid arguments: {0}")]
    BadArgs(String),
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("base graph contains K2({0})")]
    BaseNotFree(usize),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no copy of the target graph exists")]
    NotFound,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
