use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid degree vector: {0}")]
    InvalidDegreeVector(String),

    #[error("inconsistent bi-degree vector: {0}")]
    InconsistentBiDegree(String),

    #[error("n = {n} exceeds the enumeration cap of {cap} ({graphs} labeled graphs)")]
    CapExceeded { n: usize, cap: usize, graphs: String },

    /// A requested graph provably does not exist (parity obstruction).
    #[error("no such graph: {0}")]
    Nonexistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("reference coordinate p[n-1] is zero; natural parameters are undefined")]
    ReferenceCoordinate,

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("graph outside model support: {0}")]
    OutOfSupport(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
