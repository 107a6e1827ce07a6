//! Error type shared by all modules.

use thiserror::Error;

/// Failure modes of grid construction, configuration validation, and the
/// numerical kernels.
///
/// `Config` carries the name of the violated condition so a CLI caller can
/// report exactly which hypothesis a run configuration failed.
#[derive(Debug, Error)]
pub enum VardError {
    /// Invalid run configuration or inadmissible problem data. `condition`
    /// names the failed requirement (e.g. `"(p_H)"`, `"cond_q1"`, `"k>0"`).
    #[error("configuration error [{condition}]: {message}")]
    Config { condition: String, message: String },

    /// A numerical routine failed to produce a usable result (root not
    /// bracketed, iteration diverged, non-finite value).
    #[error("numeric failure in {context}: {message}")]
    Numeric { context: String, message: String },

    /// I/O failure while reading configuration or writing reports.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON in a configuration file.
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

impl VardError {
    pub fn config(condition: &str, message: impl Into<String>) -> Self {
        VardError::Config {
            condition: condition.to_string(),
            message: message.into(),
        }
    }

    pub fn numeric(context: &str, message: impl Into<String>) -> Self {
        VardError::Numeric {
            context: context.to_string(),
            message: message.into(),
        }
    }

    /// Process exit code for the CLI: configuration problems exit 2,
    /// numeric failures exit 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            VardError::Config { .. } | VardError::Parse(_) => 2,
            VardError::Numeric { .. } | VardError::Io(_) => 3,
        }
    }
}
