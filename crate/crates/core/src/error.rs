use std::path::PathBuf;

use crate::simplex::LpStatus;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),

    #[error("enumeration would visit {points} points, more than the budget of {budget}")]
    Explosion { points: f64, budget: f64 },

    #[error("optimality gap undefined: |z*| = {z_star:e} is below the division guard")]
    DivisionGuard { z_star: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("log-variant domain error: layer value {value} is not above -1")]
    LogDomain { value: f64 },

    #[error("simplex numerical failure: {0}")]
    NumericalFailure(String),

    #[error("simplex iteration limit of {0} reached")]
    IterationLimit(usize),

    #[error("LP was expected to be optimal but is {0:?}")]
    LpNotOptimal(LpStatus),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}
