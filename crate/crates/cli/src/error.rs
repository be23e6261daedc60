use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tracelab_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Config(_) => "config",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Json(_) => "json",
            CliError::Csv(_) => "csv",
        }
    }

    /// 2 for bad input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Core(e) if matches!(e.kind(), "parse" | "not_prime" | "modulus_out_of_range") => 2,
            _ => 1,
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            kind: self.kind().to_string(),
            message: self.to_string(),
        }
    }
}

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

pub type Result<T> = std::result::Result<T, CliError>;
