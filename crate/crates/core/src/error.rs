use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the model, search engine, experiment harness and CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {what}")]
    NonFinite { what: String },

    #[error("invalid value for `{key}`: {value} (accepted: {accepted})")]
    InvalidParameter {
        key: String,
        value: String,
        accepted: String,
    },

    #[error("objective has no known global maximum; {needed} requires one")]
    MissingGlobalMax { needed: &'static str },

    #[error("linear fit needs at least two distinct x values, got {distinct}")]
    UnderdeterminedFit { distinct: usize },

    #[error("no converged runs in cell {cell} ({runs} runs)")]
    NoConvergedRuns { cell: String, runs: usize },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("output directory {0} already exists (pass --overwrite to replace it)")]
    OutputExists(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(
        key: impl Into<String>,
        value: impl ToString,
        accepted: impl Into<String>,
    ) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            value: value.to_string(),
            accepted: accepted.into(),
        }
    }

    pub(crate) fn non_finite(what: impl Into<String>) -> Self {
        Error::NonFinite { what: what.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
