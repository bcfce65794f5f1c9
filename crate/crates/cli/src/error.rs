use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Lookup(String),
    #[error("{0}")]
    ScaleTooSmall(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Other(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Lookup(_) => 2,
            CliError::ScaleTooSmall(_) => 3,
            CliError::Io { .. } => 4,
            CliError::Other(_) => 5,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<expnn::Error> for CliError {
    fn from(e: expnn::Error) -> Self {
        use expnn::Error as E;
        match e {
            E::ScaleTooSmall { .. } => CliError::ScaleTooSmall(e.to_string()),
            E::Lookup(_) | E::UnsupportedKernel(_) => CliError::Lookup(e.to_string()),
            E::InvalidParameter(_) | E::Domain(_) | E::Construction { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Other(e.to_string()),
        }
    }
}
