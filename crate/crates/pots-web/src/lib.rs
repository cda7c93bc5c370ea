//! Interactive browser demo: single-cell simulation plus the win-rate and
//! NCE charts, driven by the same engine and SVG rendering as the CLI.
//!
//! Build for the web with:
//! `cargo build -p pots-web --release --target wasm32-unknown-unknown`
//! followed by `wasm-bindgen --target web` (see www/index.html).

use serde::Serialize;
use wasm_bindgen::prelude::*;

use pots_sim::report::{build_records, nce_chart, win_rate_chart};
use pots_sim::{run_scenario, run_sweep, SimConfig, SimError};

/// Ratios shown in the demo sweep charts; 0 and 1 are trivial and omitted.
const CHART_ALPHAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Serialize)]
struct CellReport {
    team_size: u32,
    attacker_ratio: f64,
    total_nodes: u32,
    attacker_count: u32,
    team_count: u32,
    rounds: u32,
    repetitions: u32,
    win_rate_mean_pct: f64,
    win_rate_std_pct: f64,
    theory_alpha_pow_n_pct: f64,
    theory_exact_pct: f64,
    max_streak_max: u32,
    max_streak_mean: f64,
    mean_round_seconds: f64,
    total_computation_mean_s: f64,
}

fn demo_config(total_nodes: u32, rounds: u32, repetitions: u32, seed: u64) -> SimConfig {
    SimConfig {
        total_nodes,
        rounds,
        repetitions,
        base_seed: seed,
        ..SimConfig::default()
    }
}

fn cell_json(
    total_nodes: u32,
    team_size: u32,
    alpha: f64,
    rounds: u32,
    repetitions: u32,
    seed: u64,
) -> Result<String, SimError> {
    let mut config = demo_config(total_nodes, rounds, repetitions, seed);
    config.team_sizes = vec![team_size];
    config.attacker_ratios = vec![alpha];
    config.validate()?;
    let scenario = config.scenario(team_size, alpha)?;
    let summary = run_scenario(&scenario, &config, 0);
    let mean_round_seconds = summary.total_computation_mean
        / (f64::from(rounds) * f64::from(scenario.team_count));
    let report = CellReport {
        team_size,
        attacker_ratio: alpha,
        total_nodes,
        attacker_count: scenario.attacker_count,
        team_count: scenario.team_count,
        rounds,
        repetitions,
        win_rate_mean_pct: summary.win_rate_mean,
        win_rate_std_pct: summary.win_rate_std,
        theory_alpha_pow_n_pct: 100.0 * summary.theory.p_independent,
        theory_exact_pct: summary.theory.expected_win_rate_percent,
        max_streak_max: summary.max_streak_max,
        max_streak_mean: summary.max_streak_mean,
        mean_round_seconds,
        total_computation_mean_s: summary.total_computation_mean,
    };
    Ok(serde_json::to_string(&report).expect("report serialization"))
}

fn chart_svg(
    total_nodes: u32,
    rounds: u32,
    repetitions: u32,
    seed: u64,
    build: impl Fn(&[pots_sim::report::SummaryRecord]) -> Option<pots_sim::report::plot::LineChart>,
) -> Result<String, SimError> {
    let mut config = demo_config(total_nodes, rounds, repetitions, seed);
    config.attacker_ratios = CHART_ALPHAS.to_vec();
    // keep alpha = 0.5 for NCE plus the full ratio spread for win rates
    config.validate()?;
    let summaries = run_sweep(&config)?;
    let records = build_records(&summaries);
    build(&records).ok_or(SimError::Domain {
        context: "chart",
        reason: "not enough data to draw the chart".into(),
    })
    .map(|chart| chart.to_svg())
}

/// Simulates one (team size, attacker ratio) cell and returns a JSON report.
#[wasm_bindgen]
pub fn simulate_cell(
    total_nodes: u32,
    team_size: u32,
    alpha: f64,
    rounds: u32,
    repetitions: u32,
    seed: u64,
) -> Result<String, JsValue> {
    cell_json(total_nodes, team_size, alpha, rounds, repetitions, seed)
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Sweeps the default team-size grid over alpha = 0.1..0.9 and returns the
/// attacker-win-rate chart as an SVG string.
#[wasm_bindgen]
pub fn win_rate_chart_svg(
    total_nodes: u32,
    rounds: u32,
    repetitions: u32,
    seed: u64,
    log_y: bool,
) -> Result<String, JsValue> {
    chart_svg(total_nodes, rounds, repetitions, seed, |records| {
        win_rate_chart(records, log_y)
    })
    .map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Same sweep, rendered as the NCE-vs-team-size chart (alpha = 0.5 series).
#[wasm_bindgen]
pub fn nce_chart_svg(
    total_nodes: u32,
    rounds: u32,
    repetitions: u32,
    seed: u64,
) -> Result<String, JsValue> {
    chart_svg(total_nodes, rounds, repetitions, seed, nce_chart)
        .map_err(|e| JsValue::from_str(&e.to_string()))
}
