use thiserror::Error;

use crate::validate::Violation;

/// Errors raised by the library and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (max |A - A^dag| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("invalid {what}: {}", join_violations(.violations))]
    Invalid {
        what: &'static str,
        violations: Vec<Violation>,
    },

    #[error("state vector is not normalised (norm {norm})")]
    NotNormalised { norm: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing section `{0}` required by this command")]
    MissingSection(&'static str),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for numeric faults (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_))
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
