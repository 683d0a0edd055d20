use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown base id `{0}`")]
    UnknownBase(String),
    #[error("unknown lane id `{0}`")]
    UnknownLane(String),
    #[error("duplicate base id `{0}`")]
    DuplicateBase(String),
    #[error("duplicate lane id `{0}`")]
    DuplicateLane(String),
    #[error("lane `{id}` has zero length ({start} -> {end})")]
    DegenerateLane { id: String, start: String, end: String },
    #[error("base `{id}`: coordinates ({lat}, {lon}) out of range")]
    InvalidCoordinates { id: String, lat: f64, lon: f64 },
    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("lane `{0}` appears more than once in the triangle")]
    RepeatedLane(String),
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("metric validation failed with {0} violation(s)")]
    MetricViolations(usize),
    #[error("{path}: row {row}: {message}")]
    Row {
        path: PathBuf,
        row: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
