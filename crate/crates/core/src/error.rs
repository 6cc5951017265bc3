use std::fmt;
use std::path::PathBuf;

/// Which side of a ratings matrix an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    User,
    Item,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::User => f.write_str("user"),
            Axis::Item => f.write_str("item"),
        }
    }
}

/// Errors produced by the estimators and their file formats.
///
/// Validation messages are stable strings ("lambda must be non-negative.",
/// "ratings must not be empty.", ...); context is appended after them where
/// it helps locate the problem.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    InvalidConfig(&'static str),

    #[error("{message} ({detail})")]
    DimensionMismatch {
        message: &'static str,
        detail: String,
    },

    #[error("factorization failed: regularized kernel matrix is singular or indefinite (pivot {pivot} at row {row})")]
    Factorization { row: usize, pivot: f64 },

    #[error("Model has not been fitted yet.")]
    NotFitted,

    #[error("ratings must not be empty.")]
    EmptyRatings,

    #[error("{axis} index out of range. ({axis} {index}, expected < {len})")]
    IndexOutOfRange {
        axis: Axis,
        index: usize,
        len: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: ragged rows: line {line} has {found} fields, expected {expected}")]
    Ragged {
        path: PathBuf,
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("{path}: malformed header: expected `{expected}`, found `{found}`")]
    Header {
        path: PathBuf,
        expected: &'static str,
        found: String,
    },

    #[error("unsupported archive version {found} (this build reads version {supported})")]
    VersionMismatch { found: u32, supported: u32 },

    #[error("archive holds a {found} model, expected {expected}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("malformed archive: {0}")]
    Archive(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(message: &'static str, detail: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            message,
            detail: detail.into(),
        }
    }
}
