//! Error type shared by loaders, solvers, and the evaluation harness.

use std::fmt;
use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// File could not be read or written.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A row or line could not be parsed.
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    /// Time stamps are not strictly increasing.
    Ordering {
        path: String,
        line: usize,
        message: String,
    },
    /// Sampling grid too irregular to infer a rate.
    IrregularSampling { cv: f64 },
    /// Matrix or trajectory dimensions do not line up.
    Shape(String),
    /// A solver or loader parameter is out of range.
    Parameter(String),
    /// Input geometry does not determine a unique fit.
    DegenerateGeometry(String),
    /// Keypoint schema inconsistency.
    Schema(String),
    /// Report and survey labels do not join.
    Join(String),
    /// All values identical where a spread is required.
    DegenerateScale(String),
    /// Manifest-level validation failure.
    Manifest(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io { path, source } => write!(f, "io error on {}: {}", path.display(), source),
            Error::Parse {
                path,
                line,
                message,
            } => write!(f, "parse error in {path} line {line}: {message}"),
            Error::Ordering {
                path,
                line,
                message,
            } => write!(f, "ordering error in {path} line {line}: {message}"),
            Error::IrregularSampling { cv } => {
                write!(
                    f,
                    "irregular sampling: delta-t coefficient of variation {cv:.4} exceeds 0.01"
                )
            }
            Error::Shape(msg) => write!(f, "shape error: {msg}"),
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::DegenerateGeometry(msg) => write!(f, "degenerate geometry: {msg}"),
            Error::Schema(msg) => write!(f, "schema error: {msg}"),
            Error::Join(msg) => write!(f, "join error: {msg}"),
            Error::DegenerateScale(msg) => write!(f, "degenerate scale: {msg}"),
            Error::Manifest(msg) => write!(f, "manifest error: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
