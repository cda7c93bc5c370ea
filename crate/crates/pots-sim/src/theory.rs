//! Analytic oracles for table generation and acceptance checks.
//!
//! Two win-probability routes are kept side by side: the independence
//! approximation `alpha^N` and the exact without-replacement product
//! `prod (A-i)/(n-i)`. The simulation samples teams without replacement, so
//! its long-run expectation is the exact value; the gap between the two
//! explains residual bias at large N.

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::rng::RandomStream;
use crate::scenario::Scenario;

/// Both analytic win probabilities for one grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoryPrediction {
    pub alpha: f64,
    pub team_size: u32,
    /// Independence approximation `alpha^N`.
    pub p_independent: f64,
    /// Exact finite-population probability that the fastest team is
    /// all-attacker.
    pub p_exact: f64,
    /// `100 * p_exact`, the expected simulated win rate.
    pub expected_win_rate_percent: f64,
}

impl TheoryPrediction {
    pub fn for_scenario(scenario: &Scenario) -> Self {
        let p_independent = alpha_pow_n(scenario.attacker_ratio, scenario.team_size);
        let p_exact = exact_product(
            u64::from(scenario.total_nodes),
            u64::from(scenario.attacker_count),
            u64::from(scenario.team_size),
        );
        TheoryPrediction {
            alpha: scenario.attacker_ratio,
            team_size: scenario.team_size,
            p_independent,
            p_exact,
            expected_win_rate_percent: 100.0 * p_exact,
        }
    }
}

fn alpha_pow_n(alpha: f64, team_size: u32) -> f64 {
    if alpha == 0.0 {
        0.0
    } else if alpha == 1.0 {
        1.0
    } else {
        (f64::from(team_size) * alpha.ln()).exp()
    }
}

fn exact_product(total_nodes: u64, attacker_count: u64, team_size: u64) -> f64 {
    if attacker_count < team_size {
        return 0.0;
    }
    (0..team_size)
        .map(|i| (attacker_count - i) as f64 / (total_nodes - i) as f64)
        .product()
}

/// Probability that all N members of a randomly formed team are
/// attacker-controlled, under the independence approximation `alpha^N`.
pub fn attack_probability_independent(alpha: f64, team_size: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(SimError::Domain {
            context: "attack_probability_independent",
            reason: format!("alpha {alpha} outside [0, 1]"),
        });
    }
    if team_size == 0 {
        return Err(SimError::Domain {
            context: "attack_probability_independent",
            reason: "team size must be at least 1".into(),
        });
    }
    Ok(alpha_pow_n(alpha, team_size))
}

/// Exact probability that a size-N team drawn without replacement from n
/// nodes (A of them attackers) is all-attacker: `prod_{i<N} (A-i)/(n-i)`.
///
/// Timing is independent of composition, so the fastest team is uniform
/// among teams and this is also the per-round attacker win probability.
pub fn attack_probability_exact(total_nodes: u64, attacker_count: u64, team_size: u64) -> Result<f64> {
    if attacker_count > total_nodes {
        return Err(SimError::Domain {
            context: "attack_probability_exact",
            reason: format!("attacker count {attacker_count} exceeds {total_nodes} nodes"),
        });
    }
    if team_size == 0 || team_size > total_nodes {
        return Err(SimError::Domain {
            context: "attack_probability_exact",
            reason: format!("team size {team_size} outside [1, {total_nodes}]"),
        });
    }
    Ok(exact_product(total_nodes, attacker_count, team_size))
}

/// Empirical distribution of the longest success run, from brute-force
/// Bernoulli simulation.
#[derive(Clone, Debug)]
pub struct StreakQuantiles {
    sorted: Vec<u32>,
}

impl StreakQuantiles {
    /// Empirical quantile at level `q` in [0, 1]: the order statistic of
    /// rank `ceil(q * trials)`, clamped to the observed range.
    pub fn quantile(&self, q: f64) -> u32 {
        assert!((0.0..=1.0).contains(&q), "quantile level outside [0, 1]");
        let rank = (q * self.sorted.len() as f64).ceil() as usize;
        self.sorted[rank.clamp(1, self.sorted.len()) - 1]
    }

    pub fn trials(&self) -> usize {
        self.sorted.len()
    }
}

/// Simulates `trials` Bernoulli(p) sequences of length `rounds` and records
/// each sequence's longest success run. Reference oracle for the engine's
/// max-streak output; it never touches the round engine.
pub fn streak_quantiles_oracle(
    p: f64,
    rounds: u32,
    trials: u32,
    stream: &mut RandomStream,
) -> StreakQuantiles {
    assert!((0.0..=1.0).contains(&p), "p outside [0, 1]");
    assert!(rounds >= 1 && trials >= 1);
    let mut maxima = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let mut best = 0u32;
        let mut current = 0u32;
        for _ in 0..rounds {
            if stream.next_uniform(0.0, 1.0) < p {
                current += 1;
                best = best.max(current);
            } else {
                current = 0;
            }
        }
        maxima.push(best);
    }
    maxima.sort_unstable();
    StreakQuantiles { sorted: maxima }
}
