//! The `rankfair` command line and the reproducible experiments behind it.

pub mod commands;
pub mod experiments;
pub mod plot;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const GUARD: i32 = 3;
    pub const DATA: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rankfair::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use rankfair::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Core(E::OutOfRange(_)) => exit::USAGE,
            CliError::Core(E::Capacity { .. } | E::Precision(_)) => exit::GUARD,
            CliError::Core(_) | CliError::Io { .. } => exit::DATA,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

pub(crate) fn read_file(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub(crate) fn write_file(path: &std::path::Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    }
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}
