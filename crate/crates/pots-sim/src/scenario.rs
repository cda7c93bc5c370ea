//! One (team size, attacker ratio) cell of the experiment grid.

use serde::Serialize;

use crate::error::{Result, SimError};

/// A fully resolved simulation cell with its derived quantities.
///
/// Construct through [`Scenario::new`], which enforces the divisibility and
/// range invariants; the fields themselves are plain data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Scenario {
    /// Nodes per team (N).
    pub team_size: u32,
    /// Fraction of nodes controlled by the attacker (alpha).
    pub attacker_ratio: f64,
    /// Total nodes in the network (n).
    pub total_nodes: u32,
    /// Attacker-controlled node count, `round(alpha * n)` ties away from zero.
    pub attacker_count: u32,
    /// Teams per round, `n / N`.
    pub team_count: u32,
    /// Total seconds of work assigned to a team.
    pub workload_seconds: f64,
    /// Seconds of base work per node, `workload / N`.
    pub base_time: f64,
    /// Lower bound of the uniform speed multiplier.
    pub gamma_low: f64,
    /// Upper bound of the uniform speed multiplier.
    pub gamma_high: f64,
}

impl Scenario {
    pub fn new(
        total_nodes: u32,
        team_size: u32,
        attacker_ratio: f64,
        workload_seconds: f64,
        gamma_low: f64,
        gamma_high: f64,
    ) -> Result<Self> {
        if total_nodes == 0 {
            return Err(SimError::config("total_nodes", "must be at least 1"));
        }
        if team_size == 0 {
            return Err(SimError::config("team_sizes", "team size must be at least 1"));
        }
        if !total_nodes.is_multiple_of(team_size) {
            return Err(SimError::config(
                "team_sizes",
                format!("total_nodes={total_nodes} is not divisible by team size {team_size}"),
            ));
        }
        if !(0.0..=1.0).contains(&attacker_ratio) {
            return Err(SimError::config(
                "attacker_ratios",
                format!("ratio {attacker_ratio} is outside [0, 1]"),
            ));
        }
        // comparisons written to reject NaN as well
        let workload_ok = workload_seconds > 0.0 && workload_seconds.is_finite();
        if !workload_ok {
            return Err(SimError::config("workload_seconds", "must be positive"));
        }
        let gamma_ok = gamma_low > 0.0 && gamma_low < gamma_high && gamma_high.is_finite();
        if !gamma_ok {
            return Err(SimError::config(
                "gamma_low/gamma_high",
                format!("need 0 < gamma_low < gamma_high, got {gamma_low}/{gamma_high}"),
            ));
        }
        let attacker_count = (attacker_ratio * f64::from(total_nodes)).round() as u32;
        Ok(Scenario {
            team_size,
            attacker_ratio,
            total_nodes,
            attacker_count,
            team_count: total_nodes / team_size,
            workload_seconds,
            base_time: workload_seconds / f64::from(team_size),
            gamma_low,
            gamma_high,
        })
    }

    /// Reference parameters for a single cell: 1600 nodes, 600 s of team
    /// workload, gamma on [0.8, 1.2].
    pub fn with_defaults(team_size: u32, attacker_ratio: f64) -> Result<Self> {
        Scenario::new(1600, team_size, attacker_ratio, 600.0, 0.8, 1.2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities_at_reference_defaults() {
        let s = Scenario::with_defaults(64, 0.5).unwrap();
        assert_eq!(s.team_count, 25);
        assert_eq!(s.attacker_count, 800);
        assert_eq!(s.base_time, 9.375);
        // T_base * N recovers the workload exactly for power-of-two N.
        assert_eq!(s.base_time * 64.0, 600.0);
    }

    #[test]
    fn rejects_non_divisible_team_size() {
        let err = Scenario::with_defaults(3, 0.5).unwrap_err();
        assert!(matches!(err, SimError::Config { .. }), "{err}");
        assert!(err.to_string().contains("not divisible"));
    }

    #[test]
    fn rejects_out_of_range_ratio() {
        assert!(Scenario::with_defaults(2, 1.5).is_err());
        assert!(Scenario::with_defaults(2, -0.1).is_err());
    }

    #[test]
    fn attacker_count_rounds_to_nearest_ties_away() {
        // 0.25 * 10 = 2.5 rounds away from zero to 3.
        let s = Scenario::new(10, 1, 0.25, 600.0, 0.8, 1.2).unwrap();
        assert_eq!(s.attacker_count, 3);
        let s = Scenario::new(10, 1, 0.24, 600.0, 0.8, 1.2).unwrap();
        assert_eq!(s.attacker_count, 2);
        // On the reference grid alpha * n is integral.
        let s = Scenario::with_defaults(1, 0.3).unwrap();
        assert_eq!(s.attacker_count, 480);
    }

    #[test]
    fn boundary_ratios() {
        assert_eq!(Scenario::with_defaults(8, 0.0).unwrap().attacker_count, 0);
        assert_eq!(Scenario::with_defaults(8, 1.0).unwrap().attacker_count, 1600);
    }

    #[test]
    fn rejects_bad_gamma_interval() {
        assert!(Scenario::new(4, 2, 0.5, 600.0, 1.2, 0.8).is_err());
        assert!(Scenario::new(4, 2, 0.5, 600.0, 0.0, 1.2).is_err());
    }
}
