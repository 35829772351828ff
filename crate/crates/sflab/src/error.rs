use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{}:{line}: {message}", file.display())]
    DatasetFormat { file: PathBuf, line: usize, message: String },
    #[error("data error: {0}")]
    Data(String),
    #[error(transparent)]
    Core(#[from] sflab_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn dataset(file: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        CliError::DatasetFormat {
            file: file.into(),
            line,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Process exit status: 2 for configuration problems, 3 for bad input
    /// data, 4 when training diverges.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(sflab_core::Error::DivergenceDetected { .. }) => 4,
            CliError::Core(sflab_core::Error::InvalidParameter(_) | sflab_core::Error::InvalidProbability(_)) => 2,
            CliError::DatasetFormat { .. } | CliError::Data(_) | CliError::Core(_) | CliError::Io { .. } => 3,
            CliError::Json(_) => 1,
        }
    }
}
