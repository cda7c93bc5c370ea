//! `pots` — batch front end for the Proof of Team Sprint round simulator.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 strict-mode
//! comparison failure.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use pots_sim::report::{
    build_records, compare_to_theory, emit_csv, emit_json, emit_plots, load_config, parse_csv,
    PlotOptions, RunManifest, SummaryRecord, TheoryComparison,
};
use pots_sim::{run_scenario, run_sweep, SimConfig, SimError, TheoryPrediction};

const EXIT_CONFIG: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_STRICT: u8 = 3;

#[derive(Parser)]
#[command(name = "pots", version, about = "Proof of Team Sprint consensus round simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full (team size, attacker ratio) sweep and write reports
    Run(RunArgs),
    /// Run a single grid cell and print its summary
    Scenario(ScenarioArgs),
    /// Print the analytic win-probability table for the configured grid
    Theory(TheoryArgs),
    /// Check a previously emitted CSV against the analytic predictions
    Compare(CompareArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file (TOML); missing keys take the reference defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the base seed from the config
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for CSV/JSON/SVG outputs and the run manifest
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads (defaults to all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Skip SVG figure emission
    #[arg(long)]
    no_plots: bool,
    /// Log-scale the win-rate figure's y axis
    #[arg(long)]
    log_y: bool,
    /// Exit nonzero if the theory comparison flags any cell or a figure is skipped
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Team size N
    #[arg(long = "team-size", short = 'n')]
    team_size: u32,
    /// Attacker ratio alpha in [0, 1]
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Override rounds per repetition
    #[arg(long)]
    rounds: Option<u32>,
    /// Override repetition count
    #[arg(long)]
    repetitions: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// CSV file produced by `pots run`
    csv: PathBuf,
    /// Manifest to read repetitions/rounds from (default: manifest.json next
    /// to the CSV, when present)
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Repetitions behind each CSV row (overrides the manifest)
    #[arg(long)]
    repetitions: Option<u32>,
    /// Rounds per repetition (overrides the manifest)
    #[arg(long)]
    rounds: Option<u32>,
    /// Exit nonzero when any cell is flagged
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Scenario(args) => cmd_scenario(args),
        Command::Theory(args) => cmd_theory(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_config_error() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::from(EXIT_IO)
            }
        }
    }
}

fn resolve_config(path: Option<&Path>, seed: Option<u64>) -> Result<SimConfig, SimError> {
    let mut config = match path {
        Some(p) => load_config(p)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = seed {
        config.base_seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn install_pool<T: Send>(threads: Option<usize>, work: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    }
}

/// Percent formatting for display tables: two decimals, switching to
/// scientific notation below 10^-4 % (the style of the reference tables).
fn fmt_pct(pct: f64) -> String {
    if pct != 0.0 && pct.abs() < 1e-4 {
        format!("{pct:.1e}")
    } else {
        format!("{pct:.2}")
    }
}

fn print_comparison_tables(records: &[SummaryRecord], comparison: &TheoryComparison) {
    let mut alphas: Vec<f64> = Vec::new();
    for r in records {
        if !alphas.contains(&r.attacker_ratio) {
            alphas.push(r.attacker_ratio);
        }
    }
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for alpha in alphas {
        println!("\nalpha = {alpha}");
        println!(
            "{:>6} {:>12} {:>10} {:>12} {:>13} {:>8}",
            "N", "Sim. Mean", "Sim. Std", "Theory a^N", "Theory exact", "z"
        );
        for r in records.iter().filter(|r| r.attacker_ratio == alpha) {
            let entry = comparison
                .entries
                .iter()
                .find(|e| e.team_size == r.team_size && e.attacker_ratio == r.attacker_ratio);
            let z = match entry.and_then(|e| e.z_score) {
                Some(z) => format!("{z:.2}"),
                None => "-".to_string(),
            };
            let flag = if entry.is_some_and(|e| e.flagged) { "  <- FLAG" } else { "" };
            println!(
                "{:>6} {:>12} {:>10} {:>12} {:>13} {:>8}{flag}",
                r.team_size,
                fmt_pct(r.win_rate_mean_pct),
                fmt_pct(r.win_rate_std_pct),
                fmt_pct(r.theory_alpha_pow_n_pct),
                fmt_pct(r.theory_exact_pct),
                z,
            );
        }
    }
}

fn print_nce_table(records: &[SummaryRecord]) {
    let with_nce: Vec<&SummaryRecord> = records
        .iter()
        .filter(|r| r.attacker_ratio == 0.5 && r.nce.is_some())
        .collect();
    if with_nce.len() < 2 {
        return;
    }
    println!("\nNCE at alpha = 0.5 (T_1 / T_N)");
    println!("{:>6} {:>12} {:>22}", "N", "NCE", "mean computation (s)");
    for r in with_nce {
        println!(
            "{:>6} {:>12.3} {:>22.1}",
            r.team_size,
            r.nce.unwrap(),
            r.total_computation_mean_s
        );
    }
}

fn cmd_run(args: RunArgs) -> Result<u8, SimError> {
    let config = resolve_config(args.config.as_deref(), args.seed)?;
    let cells = config.team_sizes.len() * config.attacker_ratios.len();
    println!(
        "sweep: {} team sizes x {} ratios = {cells} cells, {} repetitions x {} rounds, seed {}",
        config.team_sizes.len(),
        config.attacker_ratios.len(),
        config.repetitions,
        config.rounds,
        config.base_seed
    );

    let mut manifest = RunManifest::begin(&config);
    let started = Instant::now();
    let summaries = install_pool(args.threads, || run_sweep(&config))?;
    println!("simulated {cells} cells in {:.1?}", started.elapsed());

    std::fs::create_dir_all(&args.out_dir).map_err(|e| SimError::io(&args.out_dir, e))?;
    let csv_path = args.out_dir.join("summary.csv");
    let json_path = args.out_dir.join("summary.json");
    emit_csv(&summaries, &csv_path)?;
    emit_json(&summaries, &json_path)?;
    let mut outputs = vec![csv_path.clone(), json_path];

    let mut skipped_plots = Vec::new();
    if !args.no_plots {
        let outcome = emit_plots(
            &summaries,
            &args.out_dir,
            PlotOptions {
                log_y_win_rate: args.log_y,
            },
        )?;
        outputs.extend(outcome.written);
        skipped_plots = outcome.skipped;
        for warning in &skipped_plots {
            eprintln!("warning: {warning}");
        }
    }

    manifest.finish(outputs.iter().map(|p| p.to_path_buf()).collect());
    let manifest_path = args.out_dir.join("manifest.json");
    manifest.save(&manifest_path)?;
    outputs.push(manifest_path);

    let records = build_records(&summaries);
    let comparison = compare_to_theory(&records, config.repetitions, config.rounds);
    print_comparison_tables(&records, &comparison);
    print_nce_table(&records);

    println!();
    for path in &outputs {
        println!("wrote {}", path.display());
    }
    let flagged = comparison.flagged_count();
    if flagged > 0 {
        println!("theory comparison flagged {flagged} cell(s)");
    } else {
        println!("theory comparison: all cells consistent");
    }
    if args.strict && (flagged > 0 || !skipped_plots.is_empty()) {
        return Ok(EXIT_STRICT);
    }
    Ok(0)
}

fn cmd_scenario(args: ScenarioArgs) -> Result<u8, SimError> {
    let mut config = resolve_config(args.config.as_deref(), args.seed)?;
    if let Some(rounds) = args.rounds {
        config.rounds = rounds;
    }
    if let Some(reps) = args.repetitions {
        config.repetitions = reps;
    }
    // A single cell is its own 1x1 grid, ordinal 0; identical to running a
    // sweep restricted to this cell.
    config.team_sizes = vec![args.team_size];
    config.attacker_ratios = vec![args.alpha];
    config.validate()?;
    let scenario = config.scenario(args.team_size, args.alpha)?;

    let started = Instant::now();
    let summary = install_pool(args.threads, || run_scenario(&scenario, &config, 0));
    println!(
        "N={} alpha={} ({} attackers / {} nodes, {} teams), {} reps x {} rounds in {:.1?}",
        scenario.team_size,
        scenario.attacker_ratio,
        scenario.attacker_count,
        scenario.total_nodes,
        scenario.team_count,
        config.repetitions,
        config.rounds,
        started.elapsed()
    );
    let records = build_records(std::slice::from_ref(&summary));
    let comparison = compare_to_theory(&records, config.repetitions, config.rounds);
    print_comparison_tables(&records, &comparison);
    println!(
        "\nmax streak: max {} / mean {:.2} over {} repetitions",
        summary.max_streak_max,
        summary.max_streak_mean,
        config.repetitions
    );
    println!(
        "mean total computation: {:.1} s per repetition",
        summary.total_computation_mean
    );
    Ok(if comparison.flagged_count() > 0 { EXIT_STRICT } else { 0 })
}

fn cmd_theory(args: TheoryArgs) -> Result<u8, SimError> {
    let config = resolve_config(args.config.as_deref(), None)?;
    println!(
        "{:>6} {:>8} {:>14} {:>14}",
        "N", "alpha", "a^N (%)", "exact (%)"
    );
    for scenario in config.grid()? {
        let t = TheoryPrediction::for_scenario(&scenario);
        println!(
            "{:>6} {:>8} {:>14} {:>14}",
            scenario.team_size,
            scenario.attacker_ratio,
            fmt_pct(100.0 * t.p_independent),
            fmt_pct(t.expected_win_rate_percent),
        );
    }
    Ok(0)
}

fn cmd_compare(args: CompareArgs) -> Result<u8, SimError> {
    let records = parse_csv(&args.csv)?;
    let manifest_path = args
        .manifest
        .clone()
        .or_else(|| {
            let sibling = args.csv.parent()?.join("manifest.json");
            sibling.exists().then_some(sibling)
        });
    let manifest = match &manifest_path {
        Some(p) => Some(RunManifest::load(p)?),
        None => None,
    };
    let repetitions = args
        .repetitions
        .or(manifest.as_ref().map(|m| m.config.repetitions))
        .unwrap_or(100);
    let rounds = args
        .rounds
        .or(manifest.as_ref().map(|m| m.config.rounds))
        .unwrap_or(1000);
    println!(
        "comparing {} rows against exact theory ({repetitions} repetitions x {rounds} rounds{})",
        records.len(),
        match &manifest_path {
            Some(p) => format!(", from {}", p.display()),
            None => ", defaults".to_string(),
        }
    );
    let comparison = compare_to_theory(&records, repetitions, rounds);
    print_comparison_tables(&records, &comparison);

    let flagged = comparison.flagged_count();
    // Sanity check on the grid shape while we are here.
    let team_sizes: BTreeSet<u32> = records.iter().map(|r| r.team_size).collect();
    println!(
        "\n{} cells over {} team sizes: {flagged} flagged",
        records.len(),
        team_sizes.len()
    );
    if flagged > 0 && args.strict {
        return Ok(EXIT_STRICT);
    }
    Ok(0)
}
