use thiserror::Error;

use crate::rootfind::RootSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial needs at least one zero")]
    EmptyZeros,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("degree {degree} exceeds the coefficient expansion bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point coincides with a zero of the polynomial")]
    AtZero,

    #[error("root solver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        partial: Box<RootSet>,
    },

    #[error("grid resolution {resolution} cannot resolve the lemniscate: {reason}")]
    UnderResolved { resolution: usize, reason: String },

    #[error("critical-value count {critical} and grid count {grid} disagree at an unambiguous margin")]
    Disagreement { critical: usize, grid: usize },

    #[error("degenerate compact set: {0}")]
    DegenerateSet(String),

    #[error("all points coincide; energy is -inf")]
    CoincidentPoints,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
