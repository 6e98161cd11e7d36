//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("zero parameter for family {0}")]
    ZeroParameter(String),
    #[error("unknown matrix family or index: {0}")]
    UnknownFamily(String),
    #[error("matrix is not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("operator is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("calibration required for {0}")]
    MissingCalibration(String),
    #[error("calibration failed: {0}")]
    CalibrationFailed(String),
    #[error("generators do not commute: {0}")]
    NonCommuting(String),
    #[error("eigenspace split incomplete: {0}")]
    SplitFailure(String),
    #[error("malformed label: {0}")]
    MalformedLabel(String),
    #[error("unknown grading id: {0}")]
    UnknownGrading(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
