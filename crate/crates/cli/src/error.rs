use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec field `{field}`: {reason}")]
    Spec { field: String, reason: String },
    #[error(transparent)]
    Core(#[from] nopo_xy::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("validation failed: {0}")]
    ValidationFailed(String),
}

impl CliError {
    pub(crate) fn spec(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Spec {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 1 spec or validation failure, 2 numerical failure, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec { .. } | CliError::ValidationFailed(_) => 1,
            CliError::Core(e) if e.is_numerical() => 2,
            CliError::Core(_) => 1,
            CliError::Io { .. } => 3,
        }
    }
}
