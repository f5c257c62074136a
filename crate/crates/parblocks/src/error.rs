use serde_json::{json, Value};

use parblocks_core::Error;

/// Failure of a command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: exit code 2.
    #[error("{0}")]
    Validation(String),
    /// Unreadable or unwritable file: exit code 2.
    #[error("{0}")]
    Io(String),
    /// A module invariant failed: exit code 3.
    #[error("{0}")]
    Invariant(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Io(_) => "io",
            CliError::Invariant(_) => "invariant",
        }
    }

    /// `{"error": {"kind", "message", "exit_code"}}`.
    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantBreach(_) => CliError::Invariant(e.to_string()),
            Error::InvalidGraph(v) => CliError::Validation(v.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(format!("malformed JSON: {e}"))
    }
}
