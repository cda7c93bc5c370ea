//! One consensus round: team partitioning, per-node timing, sequential team
//! execution, round-wide truncation, and winner determination.
//!
//! Attacker flags are attached to fixed node identities `0..attacker_count`;
//! the per-round shuffle is the single source of randomization, so flags can
//! never influence sampled times. The fastest team's total is the round time
//! and every other team is cut off at it.

use rand::seq::SliceRandom;

use crate::rng::RandomStream;
use crate::scenario::Scenario;

/// A partition of all nodes into ordered teams of equal size.
#[derive(Clone, Debug)]
pub struct TeamAssignment {
    /// Permutation of `0..total_nodes`, chunked into consecutive teams.
    order: Vec<u32>,
    team_size: usize,
    attacker_count: u32,
}

impl TeamAssignment {
    /// The identity assignment (nodes in index order). Call
    /// [`TeamAssignment::reshuffle`] to randomize it.
    pub fn identity(scenario: &Scenario) -> Self {
        TeamAssignment {
            order: (0..scenario.total_nodes).collect(),
            team_size: scenario.team_size as usize,
            attacker_count: scenario.attacker_count,
        }
    }

    /// Re-randomizes the partition with an unbiased shuffle. Shuffling an
    /// arbitrary starting permutation still yields a uniform one, so the
    /// assignment can be reused round after round.
    pub fn reshuffle(&mut self, stream: &mut RandomStream) {
        self.order.shuffle(stream);
    }

    pub fn team_count(&self) -> usize {
        self.order.len() / self.team_size
    }

    /// Member node indices of team `index`, in execution order.
    pub fn team(&self, index: usize) -> &[u32] {
        &self.order[index * self.team_size..(index + 1) * self.team_size]
    }

    pub fn teams(&self) -> impl Iterator<Item = &[u32]> {
        self.order.chunks_exact(self.team_size)
    }

    /// Attacker flag for a node. Exactly `attacker_count` nodes are flagged.
    pub fn is_attacker(&self, node: u32) -> bool {
        node < self.attacker_count
    }

    pub fn is_all_attacker(&self, team_index: usize) -> bool {
        self.team(team_index).iter().all(|&n| self.is_attacker(n))
    }
}

/// Outcome of a single consensus round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundResult {
    /// The fastest team's total time in seconds.
    pub t_round: f64,
    /// Index of the fastest team (lowest index on ties).
    pub winner_index: usize,
    /// True iff every member of the winning team is attacker-controlled.
    pub attacker_won: bool,
    /// Seconds of computation actually executed across all nodes this round.
    pub round_computation: f64,
}

/// Uniformly partitions the nodes into `team_count` ordered teams.
pub fn partition_into_teams(scenario: &Scenario, stream: &mut RandomStream) -> TeamAssignment {
    let mut assignment = TeamAssignment::identity(scenario);
    assignment.reshuffle(stream);
    assignment
}

/// Samples one node's block generation time: `base_time * gamma` with gamma
/// uniform on `[gamma_low, gamma_high]`.
pub fn sample_node_time(
    base_time: f64,
    gamma_low: f64,
    gamma_high: f64,
    stream: &mut RandomStream,
) -> f64 {
    base_time * stream.next_uniform(gamma_low, gamma_high)
}

/// Total execution time of one team: member times summed in execution order.
pub fn team_total_time(node_times: &[f64]) -> f64 {
    node_times.iter().sum()
}

/// Applies the round-end truncation rule to one team's schedule.
///
/// Walking the sequential schedule with cumulative time `c`, a node of
/// duration `d` executes `min(d, t_round - c)` seconds, or zero if it never
/// starts (`c >= t_round`). The result sums to `min(sum(node_times), t_round)`.
pub fn truncate_team(node_times: &[f64], t_round: f64) -> Vec<f64> {
    let mut executed = Vec::with_capacity(node_times.len());
    let mut cumulative = 0.0;
    for &d in node_times {
        if cumulative >= t_round {
            executed.push(0.0);
        } else {
            executed.push(d.min(t_round - cumulative));
        }
        cumulative += d;
    }
    executed
}

/// Sum of [`truncate_team`] without materializing the per-node list.
pub fn truncated_total(node_times: &[f64], t_round: f64) -> f64 {
    let mut total = 0.0;
    let mut cumulative = 0.0;
    for &d in node_times {
        if cumulative >= t_round {
            break;
        }
        total += d.min(t_round - cumulative);
        cumulative += d;
    }
    total
}

/// Reusable buffers for the per-round hot path.
pub struct RoundWorkspace {
    assignment: TeamAssignment,
    node_times: Vec<f64>,
    team_totals: Vec<f64>,
}

impl RoundWorkspace {
    pub fn new(scenario: &Scenario) -> Self {
        RoundWorkspace {
            assignment: TeamAssignment::identity(scenario),
            node_times: vec![0.0; scenario.total_nodes as usize],
            team_totals: vec![0.0; scenario.team_count as usize],
        }
    }

    pub fn assignment(&self) -> &TeamAssignment {
        &self.assignment
    }
}

/// Runs one full consensus round.
pub fn execute_round(scenario: &Scenario, stream: &mut RandomStream) -> RoundResult {
    let mut workspace = RoundWorkspace::new(scenario);
    execute_round_in(scenario, stream, &mut workspace)
}

/// Runs one round using caller-owned buffers; avoids per-round allocation.
pub fn execute_round_in(
    scenario: &Scenario,
    stream: &mut RandomStream,
    ws: &mut RoundWorkspace,
) -> RoundResult {
    let team_size = scenario.team_size as usize;

    ws.assignment.reshuffle(stream);
    for t in ws.node_times.iter_mut() {
        *t = sample_node_time(scenario.base_time, scenario.gamma_low, scenario.gamma_high, stream);
    }

    let mut t_round = f64::INFINITY;
    let mut winner_index = 0usize;
    for (m, chunk) in ws.node_times.chunks_exact(team_size).enumerate() {
        let total = team_total_time(chunk);
        ws.team_totals[m] = total;
        if total < t_round {
            t_round = total;
            winner_index = m;
        }
    }

    let attacker_won = ws.assignment.is_all_attacker(winner_index);

    let mut round_computation = 0.0;
    for chunk in ws.node_times.chunks_exact(team_size) {
        round_computation += truncated_total(chunk, t_round);
    }
    debug_assert!(
        (round_computation - scenario.team_count as f64 * t_round).abs()
            <= 1e-6 * round_computation,
        "round computation {round_computation} deviates from M * t_round"
    );

    RoundResult {
        t_round,
        winner_index,
        attacker_won,
        round_computation,
    }
}
