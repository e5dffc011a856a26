use std::io;
use std::path::{Path, PathBuf};

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] ensc_core::Error),
    #[error("not converged: residual {residual:e} above tolerance {tolerance:e}")]
    NotConverged { residual: f64, tolerance: f64 },
    #[error("failed checks: {}", .0.join(", "))]
    Verification(Vec<String>),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        if source.kind() == io::ErrorKind::NotFound {
            Self::FileNotFound(path.to_path_buf())
        } else {
            Self::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    }

    pub fn parse(path: &Path, message: impl Into<String>) -> Self {
        Self::Parse {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Self::FileNotFound(_) => "FILE_NOT_FOUND",
            Self::Io { .. } => "IO_ERROR",
            Self::Parse { .. } => "PARSE_ERROR",
            Self::Config(_) => "INVALID_CONFIG",
            Self::Core(e) => e.code(),
            Self::NotConverged { .. } => "NOT_CONVERGED",
            Self::Verification(_) => "VERIFICATION_FAILED",
        }
    }

    /// 2 for problems with the inputs, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::FileNotFound(_) | Self::Parse { .. } | Self::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut err = json!({ "code": self.code(), "message": self.to_string() });
        if let Self::Verification(failed) = self {
            err["failed"] = json!(failed);
        }
        json!({ "error": err })
    }
}
