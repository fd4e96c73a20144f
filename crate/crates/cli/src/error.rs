use curveclass::CurveError;
use serde_json::json;

/// A failure reported on standard output as `{"error": {"kind", "message"}}`.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub usage: bool,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { kind: "Usage".into(), message: message.into(), usage: true }
    }

    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError { kind: kind.into(), message: message.into(), usage: false }
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        CliError::new("Internal", e.to_string())
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::new("Io", format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        if self.usage {
            2
        } else {
            1
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind, "message": self.message } })
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        CliError::new(e.kind(), e.to_string())
    }
}
