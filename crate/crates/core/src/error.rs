//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid edge thickness {0}; thickness must be >= 1")]
    InvalidThickness(i64),
    #[error("distance transform requires at least one source pixel")]
    EmptySourceSet,
    #[error("malformed image file: {0}")]
    Format(String),
    #[error("label map contains only the ignore index")]
    EmptyGt,
    #[error("no edge pixels in prediction")]
    NoEdgePixels,
    #[error("degenerate prediction: {0}")]
    DegeneratePrediction(String),
    #[error("ray bin is empty")]
    EmptyRay,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("empty boundary point set")]
    EmptyBoundary,
    #[error("all target pixels are ignored")]
    EmptyTarget,
    #[error("confusion matrix has no counts")]
    EmptyEvaluation,
    #[error("degenerate region: {0}")]
    DegenerateRegion(String),
    #[error("could not place instance after {0} attempts")]
    Placement(usize),
    #[error("band does not fit in frame: {0}")]
    Frame(String),
    #[error("corrupt dataset: {0}")]
    CorruptDataset(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit-code class: 2 usage, 3 data, 4 degenerate input.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            InvalidInput(_) | InvalidThickness(_) => 2,
            Format(_) | Shape(_) | Io(_) | CorruptDataset(_) | Placement(_) | Frame(_) => 3,
            EmptySourceSet | EmptyGt | NoEdgePixels | DegeneratePrediction(_) | EmptyRay
            | EmptyBoundary | EmptyTarget | EmptyEvaluation | DegenerateRegion(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
