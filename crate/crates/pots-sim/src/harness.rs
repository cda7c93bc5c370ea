//! Full experiment grid execution: scenarios x repetitions x rounds.
//!
//! Parallelism is per (scenario, repetition) task, matching the stream
//! derivation granularity, so the sweep output is a pure function of the
//! config and base seed regardless of thread count. Results are reduced in
//! (scenario ordinal, repetition ordinal) order.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::metrics::{max_consecutive_wins, mean_and_std};
use crate::rng::{RandomStream, DEFAULT_BASE_SEED};
use crate::round::{execute_round_in, RoundWorkspace};
use crate::scenario::Scenario;
use crate::theory::TheoryPrediction;

/// The full experiment definition. Defaults reproduce the reference setup:
/// 1600 nodes, 1000 rounds, 100 repetitions, a 7 x 11 (team size, attacker
/// ratio) grid, 600 s team workload, gamma on [0.8, 1.2].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub total_nodes: u32,
    pub rounds: u32,
    pub workload_seconds: f64,
    pub team_sizes: Vec<u32>,
    pub attacker_ratios: Vec<f64>,
    pub repetitions: u32,
    pub base_seed: u64,
    pub gamma_low: f64,
    pub gamma_high: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            total_nodes: 1600,
            rounds: 1000,
            workload_seconds: 600.0,
            team_sizes: vec![1, 2, 4, 8, 16, 32, 64],
            attacker_ratios: (0..=10).map(|i| f64::from(i) / 10.0).collect(),
            repetitions: 100,
            base_seed: DEFAULT_BASE_SEED,
            gamma_low: 0.8,
            gamma_high: 1.2,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.total_nodes == 0 {
            return Err(SimError::config("total_nodes", "must be at least 1"));
        }
        if self.rounds == 0 {
            return Err(SimError::config("rounds", "must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(SimError::config("repetitions", "must be at least 1"));
        }
        if self.team_sizes.is_empty() {
            return Err(SimError::config("team_sizes", "must list at least one team size"));
        }
        if self.attacker_ratios.is_empty() {
            return Err(SimError::config(
                "attacker_ratios",
                "must list at least one ratio",
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &n in &self.team_sizes {
            if !seen.insert(n) {
                return Err(SimError::config(
                    "team_sizes",
                    format!("duplicate team size {n}"),
                ));
            }
        }
        for (i, &a) in self.attacker_ratios.iter().enumerate() {
            if self.attacker_ratios[..i].contains(&a) {
                return Err(SimError::config(
                    "attacker_ratios",
                    format!("duplicate ratio {a}"),
                ));
            }
        }
        // Scenario::new re-checks per-cell constraints; surface the first
        // failure before any simulation work.
        for &team_size in &self.team_sizes {
            for &ratio in &self.attacker_ratios {
                self.scenario(team_size, ratio)?;
            }
        }
        Ok(())
    }

    pub fn scenario(&self, team_size: u32, attacker_ratio: f64) -> Result<Scenario> {
        Scenario::new(
            self.total_nodes,
            team_size,
            attacker_ratio,
            self.workload_seconds,
            self.gamma_low,
            self.gamma_high,
        )
    }

    /// All grid cells in deterministic row-major order: team sizes outer,
    /// attacker ratios inner. A cell's position is its scenario ordinal.
    pub fn grid(&self) -> Result<Vec<Scenario>> {
        let mut cells = Vec::with_capacity(self.team_sizes.len() * self.attacker_ratios.len());
        for &team_size in &self.team_sizes {
            for &ratio in &self.attacker_ratios {
                cells.push(self.scenario(team_size, ratio)?);
            }
        }
        Ok(cells)
    }
}

/// Aggregates of one independent repetition (one multi-round simulation).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RepetitionResult {
    pub attacker_wins: u32,
    pub win_rate_percent: f64,
    pub max_streak: u32,
    pub total_computation_seconds: f64,
}

/// Cross-repetition statistics for one grid cell, with the analytic
/// predictions attached for side-by-side reporting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub scenario: Scenario,
    pub win_rate_mean: f64,
    pub win_rate_std: f64,
    pub max_streak_max: u32,
    pub max_streak_mean: f64,
    pub total_computation_mean: f64,
    pub theory: TheoryPrediction,
    /// Per-repetition results, kept for diagnostics output.
    pub repetitions: Vec<RepetitionResult>,
}

/// Runs `rounds` consensus rounds on one stream, in round order.
pub fn run_repetition(
    scenario: &Scenario,
    stream: &mut RandomStream,
    rounds: u32,
) -> RepetitionResult {
    let mut ws = RoundWorkspace::new(scenario);
    let mut outcomes = Vec::with_capacity(rounds as usize);
    let mut total_computation = 0.0;
    for _ in 0..rounds {
        let round = execute_round_in(scenario, stream, &mut ws);
        outcomes.push(round.attacker_won);
        total_computation += round.round_computation;
    }
    let attacker_wins = outcomes.iter().filter(|&&w| w).count() as u32;
    RepetitionResult {
        attacker_wins,
        win_rate_percent: 100.0 * f64::from(attacker_wins) / f64::from(rounds),
        max_streak: max_consecutive_wins(&outcomes),
        total_computation_seconds: total_computation,
    }
}

fn summarize(scenario: Scenario, repetitions: Vec<RepetitionResult>) -> ScenarioSummary {
    let rates: Vec<f64> = repetitions.iter().map(|r| r.win_rate_percent).collect();
    let (win_rate_mean, win_rate_std) = mean_and_std(&rates);
    let streaks: Vec<f64> = repetitions.iter().map(|r| f64::from(r.max_streak)).collect();
    let (max_streak_mean, _) = mean_and_std(&streaks);
    let totals: Vec<f64> = repetitions
        .iter()
        .map(|r| r.total_computation_seconds)
        .collect();
    let (total_computation_mean, _) = mean_and_std(&totals);
    ScenarioSummary {
        theory: TheoryPrediction::for_scenario(&scenario),
        scenario,
        win_rate_mean,
        win_rate_std,
        max_streak_max: repetitions.iter().map(|r| r.max_streak).max().unwrap_or(0),
        max_streak_mean,
        total_computation_mean,
        repetitions,
    }
}

/// Maps tasks to results, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
fn map_ordered<F>(count: usize, f: F) -> Vec<RepetitionResult>
where
    F: Fn(usize) -> RepetitionResult + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Runs all repetitions of one grid cell on its derived streams.
///
/// `scenario_ordinal` must be the cell's row-major position in the config
/// grid; it pins which streams the cell consumes.
pub fn run_scenario(
    scenario: &Scenario,
    config: &SimConfig,
    scenario_ordinal: u64,
) -> ScenarioSummary {
    let reps = map_ordered(config.repetitions as usize, |rep| {
        let mut stream = RandomStream::derive(config.base_seed, scenario_ordinal, rep as u64);
        run_repetition(scenario, &mut stream, config.rounds)
    });
    summarize(*scenario, reps)
}

/// Runs the whole grid and returns one summary per cell, in grid order.
/// The output is identical for any degree of parallelism.
pub fn run_sweep(config: &SimConfig) -> Result<Vec<ScenarioSummary>> {
    config.validate()?;
    let grid = config.grid()?;
    let reps_per_cell = config.repetitions as usize;
    let results = map_ordered(grid.len() * reps_per_cell, |task| {
        let ordinal = (task / reps_per_cell) as u64;
        let rep = (task % reps_per_cell) as u64;
        let mut stream = RandomStream::derive(config.base_seed, ordinal, rep);
        run_repetition(&grid[ordinal as usize], &mut stream, config.rounds)
    });
    let mut summaries = Vec::with_capacity(grid.len());
    let mut results = results.into_iter();
    for scenario in grid {
        let reps: Vec<RepetitionResult> = results.by_ref().take(reps_per_cell).collect();
        summaries.push(summarize(scenario, reps));
    }
    Ok(summaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::streak_quantiles_oracle;

    /// Small network for fast tests: 160 nodes keeps every probability of
    /// the reference setup reachable (alpha grid multiples of 0.1 stay integral).
    fn small_config() -> SimConfig {
        SimConfig {
            total_nodes: 160,
            rounds: 200,
            repetitions: 10,
            team_sizes: vec![1, 2, 4, 8],
            attacker_ratios: vec![0.0, 0.5, 1.0],
            ..SimConfig::default()
        }
    }

    #[test]
    fn certain_win_when_all_nodes_adversarial() {
        let scenario = Scenario::new(160, 4, 1.0, 600.0, 0.8, 1.2).unwrap();
        let mut stream = RandomStream::derive(1, 0, 0);
        let rep = run_repetition(&scenario, &mut stream, 500);
        assert_eq!(rep.win_rate_percent, 100.0);
        assert_eq!(rep.max_streak, 500);
        assert_eq!(rep.attacker_wins, 500);
    }

    #[test]
    fn certain_loss_without_adversaries() {
        let scenario = Scenario::new(160, 4, 0.0, 600.0, 0.8, 1.2).unwrap();
        let mut stream = RandomStream::derive(1, 0, 1);
        let rep = run_repetition(&scenario, &mut stream, 500);
        assert_eq!(rep.win_rate_percent, 0.0);
        assert_eq!(rep.max_streak, 0);
    }

    /// Max streak at alpha=0.5, N=1 sits inside the brute-force Bernoulli
    /// oracle band in nearly every repetition.
    #[test]
    fn singleton_streaks_match_bernoulli_oracle() {
        let scenario = Scenario::new(160, 1, 0.5, 600.0, 0.8, 1.2).unwrap();
        let mut oracle_stream = RandomStream::derive(77, 0, 0);
        let oracle = streak_quantiles_oracle(0.5, 1000, 4000, &mut oracle_stream);
        let (lo, hi) = (oracle.quantile(0.005), oracle.quantile(0.995));
        assert!(lo >= 6 && hi <= 17, "band [{lo}, {hi}] out of expected shape");
        let mut in_band = 0;
        for rep in 0..30 {
            let mut stream = RandomStream::derive(5, 0, rep);
            let r = run_repetition(&scenario, &mut stream, 1000);
            if (lo..=hi).contains(&r.max_streak) {
                in_band += 1;
            }
        }
        assert!(in_band >= 28, "only {in_band}/30 repetitions inside [{lo}, {hi}]");
    }

    #[test]
    fn summary_statistics_are_consistent() {
        let config = small_config();
        let scenario = config.scenario(2, 0.5).unwrap();
        let summary = run_scenario(&scenario, &config, 1);
        assert_eq!(summary.repetitions.len(), 10);
        assert!(summary.win_rate_std >= 0.0);
        assert!(f64::from(summary.max_streak_max) >= summary.max_streak_mean);
        assert!(summary.total_computation_mean > 0.0);
        assert_eq!(summary.theory.team_size, 2);
        // 100 * (80/160) * (79/159)
        assert!((summary.theory.expected_win_rate_percent - 24.8428).abs() < 0.001);
    }

    #[test]
    fn sweep_emits_cells_in_grid_order() {
        let mut config = small_config();
        config.rounds = 50;
        config.repetitions = 3;
        let summaries = run_sweep(&config).unwrap();
        assert_eq!(summaries.len(), 12);
        let mut expected = Vec::new();
        for &n in &config.team_sizes {
            for &a in &config.attacker_ratios {
                expected.push((n, a));
            }
        }
        let got: Vec<(u32, f64)> = summaries
            .iter()
            .map(|s| (s.scenario.team_size, s.scenario.attacker_ratio))
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn sweep_rejects_invalid_cell_before_running() {
        let mut config = small_config();
        config.team_sizes = vec![1, 3];
        let err = run_sweep(&config).unwrap_err();
        assert!(err.to_string().contains("not divisible"));
    }

    #[test]
    fn config_rejects_duplicates_and_bad_ranges() {
        let mut config = small_config();
        config.team_sizes = vec![2, 2];
        assert!(config.validate().is_err());
        let mut config = small_config();
        config.attacker_ratios = vec![0.5, 1.5];
        assert!(config.validate().is_err());
        let mut config = small_config();
        config.rounds = 0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn minimal_run_produces_well_formed_summary() {
        let config = SimConfig {
            total_nodes: 8,
            rounds: 1,
            repetitions: 1,
            team_sizes: vec![2],
            attacker_ratios: vec![0.5],
            ..SimConfig::default()
        };
        let summaries = run_sweep(&config).unwrap();
        assert_eq!(summaries.len(), 1);
        assert_eq!(summaries[0].win_rate_std, 0.0);
        assert!(summaries[0].total_computation_mean > 0.0);
    }

    /// Splitting one run into two halves with the same derived streams pools
    /// to the identical mean.
    #[test]
    fn repetitions_pool_independently()  {
        let config = small_config();
        let scenario = config.scenario(4, 0.5).unwrap();
        let ordinal = 5u64;
        let summary = run_scenario(&scenario, &config, ordinal);
        let mut rates = Vec::new();
        for half in [0..5u64, 5..10] {
            for rep in half {
                let mut stream = RandomStream::derive(config.base_seed, ordinal, rep);
                rates.push(run_repetition(&scenario, &mut stream, config.rounds).win_rate_percent);
            }
        }
        let (pooled_mean, _) = mean_and_std(&rates);
        assert_eq!(pooled_mean.to_bits(), summary.win_rate_mean.to_bits());
    }

    /// Statistical monotonicity: win rate does not increase with team size,
    /// up to two pooled standard errors.
    #[test]
    fn win_rate_not_increasing_in_team_size() {
        let config = SimConfig {
            total_nodes: 160,
            rounds: 400,
            repetitions: 10,
            team_sizes: vec![1, 2, 4, 8, 16],
            attacker_ratios: vec![0.5],
            ..SimConfig::default()
        };
        let summaries = run_sweep(&config).unwrap();
        for pair in summaries.windows(2) {
            let se = |s: &ScenarioSummary| s.win_rate_std / (s.repetitions.len() as f64).sqrt();
            let pooled = (se(&pair[0]).powi(2) + se(&pair[1]).powi(2)).sqrt();
            assert!(
                pair[1].win_rate_mean <= pair[0].win_rate_mean + 2.0 * pooled,
                "win rate rose from N={} ({:.2}%) to N={} ({:.2}%)",
                pair[0].scenario.team_size,
                pair[0].win_rate_mean,
                pair[1].scenario.team_size,
                pair[1].win_rate_mean,
            );
        }
    }

    /// The sweep is a pure function of (config, seed): thread count must not
    /// change a single bit.
    #[test]
    fn sweep_is_schedule_independent() {
        let mut config = small_config();
        config.rounds = 100;
        config.repetitions = 4;
        let pools: Vec<rayon::ThreadPool> = [1, 4]
            .iter()
            .map(|&n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap())
            .collect();
        let runs: Vec<Vec<ScenarioSummary>> = pools
            .iter()
            .map(|pool| pool.install(|| run_sweep(&config).unwrap()))
            .collect();
        assert_eq!(runs[0], runs[1]);
    }
}
