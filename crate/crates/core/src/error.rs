use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid exponent {value}: {reason}")]
    InvalidExponent { value: f64, reason: &'static str },

    #[error("empty index window")]
    EmptyWindow,

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("exponent function has no pieces")]
    EmptyPieces,

    #[error("malformed piecewise data: {0}")]
    MalformedPieces(String),

    #[error("x = {0} is a singular point of the transform")]
    SingularPoint(f64),

    #[error("grid size {grid} too small, need a power of two >= {required}")]
    GridTooSmall { grid: usize, required: usize },

    #[error("symbol is unbounded or non-finite at xi = {xi}")]
    UnboundedSymbol { xi: f64 },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("hypothesis range violated: {0}")]
    HypothesisRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
