use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: u128 },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{k} is not coprime to conductor {n}")]
    NotCoprime { k: i64, n: u64 },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("orthogonality fails for characters {i} and {j}")]
    Orthogonality { i: usize, j: usize },
    #[error("corrupt character table: {0}")]
    CorruptTable(String),
    #[error("missing power map for prime {0}")]
    MissingPowerMap(u64),
    #[error("cocycle condition fails at ({x}, {y}, {z})")]
    Cocycle { x: usize, y: usize, z: usize },
    #[error("braid equation fails")]
    BraidEquation,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn budget(what: impl Into<String>, limit: impl Into<u128>) -> Self {
        Error::BudgetExceeded { what: what.into(), limit: limit.into() }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}
