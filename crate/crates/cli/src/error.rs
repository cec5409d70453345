use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid --{field}: {msg}")]
    Config { field: String, msg: String },
    #[error(transparent)]
    Run(#[from] bondperc::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn config(field: &str, msg: impl Into<String>) -> Self {
        CliError::Config { field: field.into(), msg: msg.into() }
    }

    /// 2 for configuration errors, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
