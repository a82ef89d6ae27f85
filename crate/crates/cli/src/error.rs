use std::path::PathBuf;

use thiserror::Error;
use vortexlab_core::Error as CoreError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("acceptance check failed: {0}")]
    Acceptance(String),

    #[error("run aborted: {0}")]
    Aborted(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error("plot {path}: {detail}")]
    Plot { path: PathBuf, detail: String },
}

impl CliError {
    /// 0 success, 2 configuration, 3 acceptance, 4 numerical abort, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Acceptance(_) => 3,
            CliError::Aborted(_) => 4,
            CliError::Core(e) => match e {
                CoreError::Domain { .. }
                | CoreError::InvalidGrid(_)
                | CoreError::InvalidParameter(_)
                | CoreError::Mismatch(_) => 2,
                _ => 4,
            },
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Plot { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Csv { path, source }
    }
}
