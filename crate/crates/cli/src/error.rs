use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] scargraph::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config {path}, line {line}: {message}")]
    Config { path: PathBuf, line: usize, message: String },

    #[error("invalid SCARGRAPH_WORKERS value {0:?}")]
    Workers(String),

    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(_) => "computation",
            CliError::Io { .. } => "io",
            CliError::Config { .. } => "config",
            CliError::Workers(_) => "environment",
            CliError::Invalid(_) => "parameter",
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub type CliResult<T> = Result<T, CliError>;
