use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    InvalidInput(String),
    #[error("{0}")]
    Computation(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::InvalidInput(msg.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::InvalidInput(_) => "invalid_input",
            CliError::Computation(_) => "computation",
            CliError::Io { .. } => "io",
            CliError::VerificationFailed { .. } => "verification_failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::InvalidInput(_) => 2,
            CliError::Computation(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    /// One-line JSON record for standard error.
    pub fn to_record(&self) -> String {
        serde_json::json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}

macro_rules! computation_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Computation(e.to_string())
            }
        }
    )*};
}

computation_from!(
    willmore_core::profile::ProfileError,
    willmore_core::cone::ConeError,
    willmore_core::geometry::GeometryError
);
