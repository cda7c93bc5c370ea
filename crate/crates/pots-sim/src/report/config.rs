//! Config file ingestion.
//!
//! The config is TOML with one key per [`SimConfig`] field; any key left out
//! takes its reference default, so an empty file runs the full default
//! sweep. Unknown keys are rejected by name.

use std::fs;
use std::path::Path;

use crate::error::{Result, SimError};
use crate::harness::SimConfig;

/// Parses and validates a config file. Missing file, parse failure, and
/// invariant violations surface as distinct error variants so the CLI can
/// map them to exit codes.
pub fn load_config(path: &Path) -> Result<SimConfig> {
    let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    parse_config(&text)
}

/// Parses config text; see [`load_config`].
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let config: SimConfig =
        toml::from_str(text).map_err(|e| SimError::ConfigParse(e.to_string()))?;
    config.validate()?;
    Ok(config)
}
