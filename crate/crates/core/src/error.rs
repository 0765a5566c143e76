use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not in the interior of the domain (margin {margin:e})")]
    NotInterior { margin: f64 },
    #[error("zero direction vector")]
    ZeroVector,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("invalid convex body: {0}")]
    InvalidBody(String),
    #[error("weight {0} is outside [0, 1]")]
    InvalidWeight(f64),
    #[error("invalid triangle: {0}")]
    InvalidTriangle(String),
    #[error("middle point is off the segment by {0:e}")]
    NotOnSegment(f64),
    #[error("probe needs at least one sample")]
    EmptySample,
    #[error("approach sequence has {0} points, need at least 4")]
    SequenceTooShort(usize),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
