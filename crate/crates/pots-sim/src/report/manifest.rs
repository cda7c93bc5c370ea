//! Run manifest: everything needed to reproduce a sweep byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::harness::SimConfig;
use crate::rng::GENERATOR;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    /// Full config snapshot; rerunning it with the same generator reproduces
    /// the CSV exactly.
    pub config: SimConfig,
    pub base_seed: u64,
    /// Random generator identity (name and crate version).
    pub generator: String,
    pub code_version: String,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    /// Output files written by the run, relative to the manifest's directory.
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn begin(config: &SimConfig) -> Self {
        RunManifest {
            config: config.clone(),
            base_seed: config.base_seed,
            generator: GENERATOR.to_string(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: now_ms(),
            finished_unix_ms: 0,
            outputs: Vec::new(),
        }
    }

    pub fn finish(&mut self, outputs: Vec<PathBuf>) {
        self.finished_unix_ms = now_ms();
        self.outputs = outputs;
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).expect("manifest serialization");
        fs::write(path, json).map_err(|e| SimError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| SimError::Malformed {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run_sweep;
    use crate::report::records::{build_records, records_to_csv};

    /// A manifest is sufficient to reproduce the run: re-executing its config
    /// yields a byte-identical CSV.
    #[test]
    fn manifest_round_trip_reproduces_csv() {
        let config = SimConfig {
            total_nodes: 40,
            rounds: 50,
            repetitions: 3,
            team_sizes: vec![1, 4],
            attacker_ratios: vec![0.25, 0.5],
            base_seed: 991,
            ..SimConfig::default()
        };
        let csv_before = records_to_csv(&build_records(&run_sweep(&config).unwrap()));

        let mut manifest = RunManifest::begin(&config);
        manifest.finish(vec![PathBuf::from("summary.csv")]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        manifest.save(&path).unwrap();

        let reloaded = RunManifest::load(&path).unwrap();
        assert_eq!(reloaded.config, config);
        assert_eq!(reloaded.generator, GENERATOR);
        let csv_after = records_to_csv(&build_records(&run_sweep(&reloaded.config).unwrap()));
        assert_eq!(csv_before, csv_after);
    }

    #[test]
    fn load_reports_missing_file_with_path() {
        let err = RunManifest::load(Path::new("/nope/manifest.json")).unwrap_err();
        assert!(err.to_string().contains("/nope/manifest.json"));
    }
}
