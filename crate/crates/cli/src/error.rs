use std::path::PathBuf;

/// Everything that can stop a command before it produces a verdict.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] fmkernel::Error),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Config { path: PathBuf, source: serde_json::Error },
}

impl CliError {
    /// Bounds and bad arguments share 64; 65 for unreadable configs, 74 for IO,
    /// 70 when the engine trips over its own invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Bound(_) | CliError::Usage(_) => 64,
            CliError::Engine(fmkernel::Error::Bound(_) | fmkernel::Error::Parameter(_)) => 64,
            CliError::Engine(fmkernel::Error::Internal(_)) => 70,
            CliError::Config { .. } => 65,
            CliError::Io { .. } => 74,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
