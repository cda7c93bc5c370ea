use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by configuration, simulation setup, and reporting.
#[derive(Debug, Error)]
pub enum SimError {
    /// A configuration value violates an invariant. `key` names the offending
    /// field so CLI users can find it in their config file.
    #[error("invalid value for `{key}`: {reason}")]
    Config { key: String, reason: String },

    /// The config file could not be parsed at all.
    #[error("failed to parse config: {0}")]
    ConfigParse(String),

    /// A probability or count argument is outside its domain.
    #[error("domain error in {context}: {reason}")]
    Domain { context: &'static str, reason: String },

    /// NCE requires a team-size-1 baseline in the same sweep.
    #[error("cannot compute NCE for alpha={alpha}: no team_size=1 entry in sweep")]
    MissingNceBaseline { alpha: f64 },

    /// File I/O failure, tagged with the path involved.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// An emitted artifact (CSV, manifest) could not be read back.
    #[error("failed to parse {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },
}

impl SimError {
    pub fn config(key: &str, reason: impl Into<String>) -> Self {
        SimError::Config {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors a user fixes by editing the config (CLI exit code 1);
    /// false for I/O-class failures (exit code 2).
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            SimError::Config { .. }
                | SimError::ConfigParse(_)
                | SimError::Domain { .. }
                | SimError::MissingNceBaseline { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
