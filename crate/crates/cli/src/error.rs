use rirdist::io::IoError;
use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or values. Exit 2.
    #[error("{0}")]
    Usage(String),
    /// Output location cannot be written or is locked. Exit 2.
    #[error("{0}")]
    Output(String),
    /// An input file, room profile or usable row is missing. Exit 3.
    #[error("{0}")]
    MissingData(String),
    /// An input file has the wrong schema version or shape. Exit 4.
    #[error("{0}")]
    Schema(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Output(_) => 2,
            CliError::MissingData(_) => 3,
            CliError::Schema(_) => 4,
        }
    }

    /// Classifies a failure while reading an input.
    pub fn input(e: IoError) -> Self {
        match e {
            IoError::Json { .. } | IoError::Format { .. } => CliError::Schema(e.to_string()),
            _ => CliError::MissingData(e.to_string()),
        }
    }

    /// Classifies a failure while writing an output.
    pub fn output(e: IoError) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn check_schema(what: &str, found: &str, expected: &str) -> CliResult<()> {
    if found == expected {
        Ok(())
    } else {
        Err(CliError::Schema(format!(
            "{what}: schema version {found:?}, expected {expected:?}"
        )))
    }
}
