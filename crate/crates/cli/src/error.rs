use std::path::PathBuf;

/// Failures surfaced to the command line, each with a fixed exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),

    #[error("{0}")]
    Cap(String),

    #[error("{failed} property check(s) failed")]
    CheckFailed { failed: usize },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn bad(msg: impl Into<String>) -> Self {
        CliError::BadInput(msg.into())
    }

    /// 1 = bad input, 2 = computation cap exceeded, 3 = property-check failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::BadInput(_) | CliError::Io { .. } => 1,
            CliError::Cap(_) => 2,
            CliError::CheckFailed { .. } => 3,
        }
    }
}

impl From<intricacy_core::Error> for CliError {
    fn from(e: intricacy_core::Error) -> Self {
        if e.is_cap() {
            CliError::Cap(e.to_string())
        } else {
            CliError::BadInput(e.to_string())
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
