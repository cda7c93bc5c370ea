//! Pure statistical reductions over round and repetition outcomes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Result, SimError};

/// Length of the longest run of `true` values; 0 for empty or all-false input.
pub fn max_consecutive_wins(outcomes: &[bool]) -> u32 {
    let mut best = 0u32;
    let mut current = 0u32;
    for &won in outcomes {
        if won {
            current += 1;
            best = best.max(current);
        } else {
            current = 0;
        }
    }
    best
}

/// Arithmetic mean and sample standard deviation (divisor n-1).
///
/// The standard deviation of a single value is 0. Empty input is a usage
/// error and panics.
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    assert!(!values.is_empty(), "mean_and_std requires at least one value");
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Normalized computation efficiency at a fixed attacker ratio:
/// `NCE(N) = T_1 / T_N` where `T_N` is the mean total computation time at
/// team size N.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NceTable {
    pub alpha: f64,
    /// Team size -> NCE value, in ascending team-size order.
    pub values: BTreeMap<u32, f64>,
}

/// Builds the NCE table from mean computation totals keyed by team size.
/// The map must contain the `team_size = 1` baseline.
pub fn compute_nce(alpha: f64, totals_by_team_size: &BTreeMap<u32, f64>) -> Result<NceTable> {
    let baseline = *totals_by_team_size
        .get(&1)
        .ok_or(SimError::MissingNceBaseline { alpha })?;
    let values = totals_by_team_size
        .iter()
        .map(|(&n, &total)| (n, baseline / total))
        .collect();
    Ok(NceTable { alpha, values })
}
