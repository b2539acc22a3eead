use std::path::PathBuf;

use serde::Serialize;

pub type Result<T, E = AppError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{what} not found: {}", path.display())]
    NotFound { what: &'static str, path: PathBuf },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Malformed input file; the message carries line/record context.
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    /// Bad flag combination or configuration value.
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] genfeat_core::Error),
    #[error("{0}")]
    Runtime(String),
}

impl AppError {
    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        AppError::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    /// 2 for usage and configuration problems, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        use genfeat_core::Error as E;
        match self {
            AppError::NotFound { .. } | AppError::Format { .. } | AppError::Config(_) | AppError::Read { .. } => 2,
            AppError::Core(E::Argument(_) | E::Validation(_)) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        use genfeat_core::Error as E;
        match self {
            AppError::NotFound { .. } => "not_found",
            AppError::Read { .. } | AppError::Write { .. } => "io",
            AppError::Format { .. } => "format",
            AppError::Config(_) => "config",
            AppError::Core(e) => match e {
                E::Argument(_) => "argument",
                E::Validation(_) => "validation",
                E::Contract(_) => "contract",
                E::Unsupported(_) => "unsupported",
                E::UndefinedMetric(_) => "undefined_metric",
                E::Split(_) => "split",
            },
            AppError::Runtime(_) => "runtime",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            error: &'a str,
            kind: &'a str,
            exit_code: i32,
        }
        serde_json::to_string(&Report {
            error: &self.to_string(),
            kind: self.kind(),
            exit_code: self.exit_code(),
        })
        .unwrap_or_else(|_| String::from("{\"error\":\"unprintable error\"}"))
    }
}
