use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("failed to read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {message}", file.display())]
    Parse {
        file: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: unknown class at line {line}: {label:?}", file.display())]
    UnknownClass {
        file: PathBuf,
        line: usize,
        label: String,
    },

    #[error("invalid manifest {}: {source}", path.display())]
    Manifest {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("invalid config {}: {source}", path.display())]
    Config {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("language mismatch: expected {expected:?}, found {found:?}")]
    LanguageMismatch { expected: String, found: String },

    #[error("grouping key {key:?} absent from stratum {stratum}")]
    MissingKey { key: String, stratum: String },

    #[error("empty stratum")]
    EmptyStratum,

    #[error("undefined cosine: zero vector")]
    UndefinedCosine,

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("degenerate covariance")]
    DegenerateCovariance,

    #[error("empty baseline field")]
    EmptyBaseline,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// An analysis failure tagged with the stratum or class it occurred in.
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path)
        } else {
            Error::Io { path, source }
        }
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
