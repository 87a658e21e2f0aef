use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A CSV problem tied to a 1-based line number of the file (header is line 1).
    #[error("{path}: {message} at row {row}")]
    Csv {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    CsvHeader { path: PathBuf, message: String },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("depth exceeds data horizon (depth {depth}, horizon T = {horizon})")]
    DepthExceedsHorizon { depth: usize, horizon: usize },

    #[error("insufficient data for order {order} (horizon T = {horizon})")]
    InsufficientData { order: usize, horizon: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("expected {expected} initial output values, got {got}")]
    InitialConditionLength { expected: usize, got: usize },

    #[error("transfer value not determined by data at sigma = {sigma}")]
    NotInformative { sigma: num_complex::Complex64 },

    #[error(
        "inconsistent system (rank test/solve disagreement): residual {residual:e} exceeds {bound:e}"
    )]
    InconsistentSolve { residual: f64, bound: f64 },

    #[error("decomposition failure: {0}")]
    Decomposition(String),

    #[error("pair set inconsistent with a real system: {0}")]
    NonRealPairSet(String),

    #[error("invalid pair set: {0}")]
    InvalidPairSet(String),

    #[error("order budget exhausted: no admissible interpolant of order <= {r_max}")]
    OrderBudgetExhausted { r_max: usize },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}
