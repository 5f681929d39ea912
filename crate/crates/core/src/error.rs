use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("band count must be positive")]
    ZeroBands,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rank-deficient input: smallest singular value {smallest:e}")]
    RankDeficient { smallest: f64 },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("not a Clifford generator: {0}")]
    NotAGenerator(String),
    #[error("class {class} cannot be realized with n = {n}: {reason}")]
    UnsatisfiableDimension { class: String, n: usize, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("generators {l} and {m} do not commute (deviation {deviation:e})")]
    Commutation { l: usize, m: usize, deviation: f64 },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("zero of the Pfaffian on grid point(s) {indices:?}; retry with a jittered resolution")]
    DegenerateGrid { indices: Vec<usize> },
    #[error("unpaired Pfaffian zero in plaquette {plaquette}")]
    UnpairedZero { plaquette: usize },
    #[error("Pfaffian zero at self-antipodal plaquette {plaquette}")]
    ZeroAtTrim { plaquette: usize },
    #[error("grid too coarse: {0}")]
    Resolution(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
