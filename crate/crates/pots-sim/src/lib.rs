//! Deterministic Monte Carlo simulator for Proof of Team Sprint (PoTS)
//! consensus rounds.
//!
//! PoTS partitions `n` nodes into teams of size `N` each round; team members
//! generate blocks sequentially and the fastest team wins. This crate models
//! rounds at the timing/composition level, sweeps a (team size, attacker
//! ratio) grid, and reports attacker win rates, consecutive-win streaks, and
//! normalized computation efficiency side by side with analytic predictions.
//!
//! Every run is a pure function of the configuration and a 64-bit base seed:
//! each (scenario, repetition) task draws from its own derived stream, so
//! results are byte-identical across thread counts.

pub mod error;
pub mod harness;
pub mod metrics;
pub mod report;
pub mod rng;
pub mod round;
pub mod scenario;
pub mod theory;

pub use error::{Result, SimError};
pub use harness::{run_repetition, run_scenario, run_sweep};
pub use harness::{RepetitionResult, ScenarioSummary, SimConfig};
pub use rng::{RandomStream, DEFAULT_BASE_SEED};
pub use round::{execute_round, RoundResult};
pub use scenario::Scenario;
pub use theory::TheoryPrediction;
