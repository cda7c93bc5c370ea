//! Flat per-scenario records and their CSV / JSON encodings.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::harness::ScenarioSummary;
use crate::metrics::compute_nce;

/// One CSV row. Numeric fields carry full double precision; rounding happens
/// only in display tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub team_size: u32,
    pub attacker_ratio: f64,
    pub win_rate_mean_pct: f64,
    pub win_rate_std_pct: f64,
    pub theory_alpha_pow_n_pct: f64,
    pub theory_exact_pct: f64,
    pub max_streak_max: u32,
    pub max_streak_mean: f64,
    pub total_computation_mean_s: f64,
    /// `T_1 / T_N` within this sweep at the same attacker ratio; empty when
    /// the sweep has no team-size-1 baseline for the ratio.
    pub nce: Option<f64>,
}

/// Mean computation totals grouped by attacker ratio (bit pattern keyed for
/// exact grouping), each group keyed by team size.
fn totals_by_alpha(summaries: &[ScenarioSummary]) -> BTreeMap<u64, BTreeMap<u32, f64>> {
    let mut groups: BTreeMap<u64, BTreeMap<u32, f64>> = BTreeMap::new();
    for s in summaries {
        groups
            .entry(s.scenario.attacker_ratio.to_bits())
            .or_default()
            .insert(s.scenario.team_size, s.total_computation_mean);
    }
    groups
}

/// Flattens summaries into CSV rows, attaching NCE where the sweep contains
/// the team-size-1 baseline for the row's ratio.
pub fn build_records(summaries: &[ScenarioSummary]) -> Vec<SummaryRecord> {
    let groups = totals_by_alpha(summaries);
    let nce_tables: BTreeMap<u64, BTreeMap<u32, f64>> = groups
        .iter()
        .filter_map(|(&bits, totals)| {
            compute_nce(f64::from_bits(bits), totals)
                .ok()
                .map(|table| (bits, table.values))
        })
        .collect();
    summaries
        .iter()
        .map(|s| SummaryRecord {
            team_size: s.scenario.team_size,
            attacker_ratio: s.scenario.attacker_ratio,
            win_rate_mean_pct: s.win_rate_mean,
            win_rate_std_pct: s.win_rate_std,
            theory_alpha_pow_n_pct: 100.0 * s.theory.p_independent,
            theory_exact_pct: s.theory.expected_win_rate_percent,
            max_streak_max: s.max_streak_max,
            max_streak_mean: s.max_streak_mean,
            total_computation_mean_s: s.total_computation_mean,
            nce: nce_tables
                .get(&s.scenario.attacker_ratio.to_bits())
                .and_then(|t| t.get(&s.scenario.team_size))
                .copied(),
        })
        .collect()
}

/// Serializes records as CSV: fixed header, comma delimiter, LF line
/// endings, full-precision floats.
pub fn records_to_csv(records: &[SummaryRecord]) -> String {
    assert!(!records.is_empty(), "emit_csv requires at least one summary");
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for record in records {
        writer.serialize(record).expect("in-memory CSV write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory CSV flush"))
        .expect("CSV output is ASCII")
}

/// Writes one row per scenario to `path`.
pub fn emit_csv(summaries: &[ScenarioSummary], path: &Path) -> Result<()> {
    let records = build_records(summaries);
    fs::write(path, records_to_csv(&records)).map_err(|e| SimError::io(path, e))
}

/// Reads back a CSV produced by [`emit_csv`].
pub fn parse_csv(path: &Path) -> Result<Vec<SummaryRecord>> {
    let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    parse_csv_str(&text).map_err(|reason| SimError::Malformed {
        path: path.to_path_buf(),
        reason,
    })
}

pub fn parse_csv_str(text: &str) -> std::result::Result<Vec<SummaryRecord>, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut records = Vec::new();
    for row in reader.deserialize() {
        records.push(row.map_err(|e| e.to_string())?);
    }
    if records.is_empty() {
        return Err("no data rows".to_string());
    }
    Ok(records)
}

/// Per-repetition NCE values for one grid cell (diagnostic output; the
/// headline NCE uses means).
#[derive(Clone, Debug, Serialize)]
pub struct NceDiagnostics {
    pub attacker_ratio: f64,
    pub team_size: u32,
    pub nce_per_repetition: Vec<f64>,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    records: &'a [SummaryRecord],
    nce_diagnostics: Vec<NceDiagnostics>,
}

fn nce_diagnostics(summaries: &[ScenarioSummary]) -> Vec<NceDiagnostics> {
    let mut baselines: BTreeMap<u64, &ScenarioSummary> = BTreeMap::new();
    for s in summaries {
        if s.scenario.team_size == 1 {
            baselines.insert(s.scenario.attacker_ratio.to_bits(), s);
        }
    }
    summaries
        .iter()
        .filter_map(|s| {
            let baseline = baselines.get(&s.scenario.attacker_ratio.to_bits())?;
            if baseline.repetitions.len() != s.repetitions.len() {
                return None;
            }
            Some(NceDiagnostics {
                attacker_ratio: s.scenario.attacker_ratio,
                team_size: s.scenario.team_size,
                nce_per_repetition: baseline
                    .repetitions
                    .iter()
                    .zip(&s.repetitions)
                    .map(|(b, r)| b.total_computation_seconds / r.total_computation_seconds)
                    .collect(),
            })
        })
        .collect()
}

/// Machine-readable mirror of the CSV plus per-repetition NCE diagnostics.
pub fn emit_json(summaries: &[ScenarioSummary], path: &Path) -> Result<()> {
    let records = build_records(summaries);
    let doc = JsonSummary {
        records: &records,
        nce_diagnostics: nce_diagnostics(summaries),
    };
    let json = serde_json::to_string_pretty(&doc).expect("summary serialization");
    fs::write(path, json).map_err(|e| SimError::io(path, e))
}
