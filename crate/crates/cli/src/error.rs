use etale_core::Error as CoreError;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or an invalid request.
    Parse,
    /// A resource guard was hit.
    Capacity,
    /// An internal invariant failed.
    Internal,
}

#[derive(Clone, Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Parse,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Internal,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Parse => 2,
            ErrorKind::Capacity => 3,
            ErrorKind::Internal => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let kind = match e {
            CoreError::Capacity(_) | CoreError::EnumerationCap { .. } => ErrorKind::Capacity,
            CoreError::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Parse,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::parse(format!("invalid JSON: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::parse(format!("cannot read input: {e}"))
    }
}
