use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("not positive: {0}")]
    NotPositive(String),
    #[error("declared property does not hold: {0}")]
    Refuted(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no Haar state: invariant space has dimension {0}")]
    HaarNotFound(usize),
    #[error("not a quantum group: {0}")]
    InvalidQuantumGroup(String),
    #[error("not an action: {0}")]
    InvalidAction(String),
    #[error("map does not commute with the action: {0}")]
    NotCommuting(String),
    #[error("support must be nonempty")]
    EmptySupport,
    #[error("vector is not a unit vector in the support: {0}")]
    NotUnitInSupport(String),
    #[error("invalid cocycle action: {0}")]
    InvalidCocycle(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("unknown catalog entry: {0}")]
    UnknownEntry(String),
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
