use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate calibration: {0}")]
    DegenerateCalibration(String),

    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(
        "engine disagreement at {condition}: relative error {rel_error:.6e} exceeds abort threshold {threshold:.6e}"
    )]
    EngineDisagreement {
        condition: String,
        rel_error: f64,
        threshold: f64,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

/// Coarse failure category, used for process exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Validation,
    Engine,
    Io,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidArgument(_) | Error::Config(_) => ErrorCategory::Validation,
            Error::DegenerateCalibration(_)
            | Error::DegenerateMetric(_)
            | Error::EngineDisagreement { .. } => ErrorCategory::Engine,
            Error::Io { .. } | Error::Csv { .. } => ErrorCategory::Io,
        }
    }

    /// Process exit code: 3 validation, 4 engine, 5 I/O. (2 is left to clap usage errors.)
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            ErrorCategory::Validation => 3,
            ErrorCategory::Engine => 4,
            ErrorCategory::Io => 5,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
