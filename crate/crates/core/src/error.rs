//! Error types shared across the crate.
//!
//! Errors are split into two categories so callers (in particular the CLI)
//! can distinguish problems with the input data from failures of the
//! numerical machinery.

use thiserror::Error;

/// Any error produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Problems with input data: files, schemas, group structure.
    #[error(transparent)]
    Data(#[from] DataError),
    /// Failures of numerical routines: non-convergence, degenerate matrices.
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Input-data errors.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("unknown dataset {0:?}; available: F4, CHOL")]
    UnknownDataset(String),
    #[error("failed to read {path:?}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("CSV parse error: {0}")]
    Csv(#[from] csv::Error),
    #[error("column {0:?} not found in CSV header")]
    MissingColumn(String),
    #[error("row {row}: cannot parse {value:?} as a number")]
    BadNumber { row: usize, value: String },
    #[error("row {row}: non-finite response value")]
    NonFinite { row: usize },
    #[error("control level {0:?} does not occur in the group column")]
    ControlAbsent(String),
    #[error("group {level:?} has {n} observation(s); every group needs at least 2")]
    GroupTooSmall { level: String, n: usize },
    #[error("need at least 2 group levels, found {0}")]
    TooFewGroups(usize),
    #[error("group and response lengths differ: {groups} vs {responses}")]
    LengthMismatch { groups: usize, responses: usize },
    #[error("models cannot be stacked: {0}")]
    StackMismatch(String),
    #[error("invalid scenario: {0}")]
    BadScenario(String),
}

/// Numerical errors.
#[derive(Debug, Error)]
pub enum NumericError {
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid QMC configuration: {0}")]
    BadQmcConfig(String),
    #[error("leverage is 1 for observation {index}; sandwich weight undefined")]
    UnitLeverage { index: usize },
    #[error("critical-value search did not converge after {iters} iterations")]
    CriticalSearch { iters: usize },
    #[error("optimizer did not converge: gradient norm {grad_norm:.3e} after {iters} iterations")]
    NoConvergence { grad_norm: f64, iters: usize },
    #[error("transformation derivative is non-positive at an observation after fitting")]
    NonMonotone,
    #[error("matrix inversion failed: {0}")]
    Singular(String),
    #[error("too many replicate failures for {test}: {failed} of {total}")]
    TooManyFailures {
        test: String,
        failed: usize,
        total: usize,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
