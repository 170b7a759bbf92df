use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate simplex: |det| = {det:e} is below the threshold {threshold:e}")]
    DegenerateSimplex { det: f64, threshold: f64 },

    #[error("dimension mismatch: {what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid barycentric weights: {0}")]
    InvalidBarycentric(String),

    #[error("lattice of {size} entries exceeds the cap of {cap}")]
    SizeOverflow { size: u128, cap: u128 },

    #[error("invalid order n = {0}; the operator needs n >= 1")]
    InvalidOrder(u32),

    #[error("barycentric weight s_{index} = {value:e} is negative; the point lies outside the simplex")]
    NegativeWeight { index: usize, value: f64 },

    #[error("exponent {exponent:e} exceeds the overflow guard")]
    Overflow { exponent: f64 },

    #[error("sup-norm estimate requested over an empty grid")]
    EmptyGrid,

    #[error("rate fit needs at least 3 rows with positive error, got {0}")]
    InsufficientData(usize),

    #[error("all errors are below the noise floor; the function is reproduced exactly")]
    ZeroError,

    #[error("function evaluation failed at {point:?}: {message}")]
    FunctionEval { point: Vec<f64>, message: String },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
