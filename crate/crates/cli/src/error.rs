use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("identities failed: {}", failed.join(", "))]
    Validation { failed: Vec<String> },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation { .. } => 3,
            CliError::Io(_) => 1,
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Config(_) => "config",
            CliError::Validation { .. } => "validation",
            CliError::Io(_) => "io",
        };
        let mut body = json!({
            "kind": kind,
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Validation { failed } = self {
            body["failed"] = json!(failed);
        }
        json!({ "error": body })
    }
}

impl From<vilenkin::Error> for CliError {
    fn from(e: vilenkin::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
