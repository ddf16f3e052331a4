use std::path::PathBuf;

use thiserror::Error;

use crate::subshift::Word;

/// Errors raised by orbit generation, operator assembly and the diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("seed pair ({left}, {right}) never occurs in an iterated image or has no fixed point")]
    NonExtendableSeed { left: usize, right: usize },

    #[error("iteration budget exhausted: needed {needed} symbols, reached {reached}")]
    BudgetExceeded { needed: usize, reached: usize },

    #[error("sampling table has no entry for window word {0:?}")]
    UnknownWord(Word),

    #[error("singular tridiagonal system: pivot {pivot:e} at row {row}")]
    SingularSystem { row: usize, pivot: f64 },

    #[error("energy {energy} is within {eta:e} of the section spectrum")]
    InSpectrum { energy: f64, eta: f64 },

    #[error("solution exceeded the growth guard at site {site}")]
    OverflowGuard { site: i64 },

    #[error("coefficients cover [{lo}, {hi}] but [{need_lo}, {need_hi}] is required")]
    OutOfRange {
        lo: i64,
        hi: i64,
        need_lo: i64,
        need_hi: i64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
