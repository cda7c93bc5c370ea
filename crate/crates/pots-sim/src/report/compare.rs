//! Post-hoc comparison of simulated win rates against the exact analytic
//! values, used both after a sweep and standalone on an emitted CSV.

use crate::report::records::SummaryRecord;

/// Two-sided z threshold for flagging a cell.
const Z_LIMIT: f64 = 4.0;

/// Tail probability treated as "could not plausibly happen by chance" for
/// zero-variance cells; roughly the two-sided 4-sigma tail.
const TAIL_LIMIT: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct ComparisonEntry {
    pub team_size: u32,
    pub attacker_ratio: f64,
    pub sim_mean_pct: f64,
    pub theory_exact_pct: f64,
    /// `(mean - theory) / (std / sqrt(reps))`; absent when std is zero.
    pub z_score: Option<f64>,
    pub flagged: bool,
}

#[derive(Clone, Debug)]
pub struct TheoryComparison {
    pub entries: Vec<ComparisonEntry>,
}

impl TheoryComparison {
    pub fn flagged(&self) -> Vec<&ComparisonEntry> {
        self.entries.iter().filter(|e| e.flagged).collect()
    }

    pub fn flagged_count(&self) -> usize {
        self.entries.iter().filter(|e| e.flagged).count()
    }
}

/// Scores every record against its exact theory value.
///
/// Cells with spread get a z test at |z| > 4. Zero-variance cells (all
/// repetitions identical) are checked exactly: an exact match passes, and an
/// all-zero or all-certain outcome passes iff observing it has probability
/// at least `TAIL_LIMIT` under the exact per-round win probability over
/// `rounds * repetitions` independent rounds.
pub fn compare_to_theory(
    records: &[SummaryRecord],
    repetitions: u32,
    rounds: u32,
) -> TheoryComparison {
    let entries = records
        .iter()
        .map(|r| {
            let p = r.theory_exact_pct / 100.0;
            let total_rounds = f64::from(repetitions) * f64::from(rounds);
            let (z_score, flagged) = if r.win_rate_std_pct > 0.0 {
                let se = r.win_rate_std_pct / f64::from(repetitions).sqrt();
                let z = (r.win_rate_mean_pct - r.theory_exact_pct) / se;
                (Some(z), z.abs() > Z_LIMIT)
            } else if r.win_rate_mean_pct == r.theory_exact_pct {
                (None, false)
            } else if r.win_rate_mean_pct == 0.0 {
                // P(zero wins in every round) = (1-p)^total
                let log_p_zero = total_rounds * (-p).ln_1p();
                (None, log_p_zero < TAIL_LIMIT.ln())
            } else if r.win_rate_mean_pct == 100.0 {
                let log_p_all = total_rounds * p.ln();
                (None, log_p_all < TAIL_LIMIT.ln())
            } else {
                // identical non-boundary repetitions disagreeing with theory
                (None, true)
            };
            ComparisonEntry {
                team_size: r.team_size,
                attacker_ratio: r.attacker_ratio,
                sim_mean_pct: r.win_rate_mean_pct,
                theory_exact_pct: r.theory_exact_pct,
                z_score,
                flagged,
            }
        })
        .collect();
    TheoryComparison { entries }
}
