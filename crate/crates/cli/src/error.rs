use serde_json::{json, Value};
use thiserror::Error;

/// Anything that ends a run with exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("order {n} exceeds the cap {cap} (raise it with --max-n or NEWTON_HYPER_MAX_N)")]
    OrderCap { n: usize, cap: usize },

    #[error("{0}")]
    Core(#[from] newton_hyper::Error),

    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::OrderCap { .. } => "order_cap",
            CliError::Core(newton_hyper::Error::Invalid(_)) => "invalid_data",
            CliError::Core(_) => "rejected",
            CliError::Output(_) => "output",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({
            "kind": self.kind(),
            "message": self.to_string(),
        });
        match self {
            CliError::Parse { path, .. } => body["field"] = json!(path),
            CliError::Core(newton_hyper::Error::Invalid(report)) => {
                body["issues"] = serde_json::to_value(&report.issues).unwrap_or(Value::Null);
            }
            _ => {}
        }
        json!({ "error": body })
    }
}

impl<E: std::error::Error> From<serde_path_to_error::Error<E>> for CliError {
    fn from(e: serde_path_to_error::Error<E>) -> Self {
        let path = e.path().to_string();
        CliError::Parse {
            path,
            message: e.into_inner().to_string(),
        }
    }
}
