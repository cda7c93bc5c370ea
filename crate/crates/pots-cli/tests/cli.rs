//! End-to-end checks of the `pots` binary: outputs, exit codes, and
//! determinism across worker thread counts.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pots(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pots"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_small_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    fs::write(
        &path,
        "total_nodes = 80\n\
         rounds = 120\n\
         repetitions = 6\n\
         team_sizes = [1, 2, 4]\n\
         attacker_ratios = [0.0, 0.5, 1.0]\n",
    )
    .unwrap();
    path
}

#[test]
fn run_writes_reports_and_figures() {
    let dir = tempfile::tempdir().unwrap();
    write_small_config(dir.path());
    let out = pots(
        &["run", "--config", "config.toml", "--out-dir", "out", "--threads", "2"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in [
        "out/summary.csv",
        "out/summary.json",
        "out/manifest.json",
        "out/win_rate_vs_team_size.svg",
        "out/nce_vs_team_size.svg",
        "out/max_streak_vs_team_size.svg",
    ] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("alpha = 0.5"));
    assert!(stdout.contains("all cells consistent"));
    let csv = fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10, "header + 9 cells");
}

#[test]
fn no_plots_flag_suppresses_figures() {
    let dir = tempfile::tempdir().unwrap();
    write_small_config(dir.path());
    let out = pots(
        &["run", "--config", "config.toml", "--out-dir", "out", "--no-plots"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(dir.path().join("out/summary.csv").exists());
    assert!(!dir.path().join("out/win_rate_vs_team_size.svg").exists());
}

#[test]
fn csv_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    write_small_config(dir.path());
    for (threads, out_dir) in [("1", "a"), ("4", "b")] {
        let out = pots(
            &["run", "--config", "config.toml", "--out-dir", out_dir, "--threads", threads, "--no-plots"],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let a = fs::read(dir.path().join("a/summary.csv")).unwrap();
    let b = fs::read(dir.path().join("b/summary.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    write_small_config(dir.path());
    for (seed, out_dir) in [("7", "a"), ("7", "b"), ("8", "c")] {
        let out = pots(
            &["run", "--config", "config.toml", "--out-dir", out_dir, "--seed", seed, "--no-plots"],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let a = fs::read(dir.path().join("a/summary.csv")).unwrap();
    let b = fs::read(dir.path().join("b/summary.csv")).unwrap();
    let c = fs::read(dir.path().join("c/summary.csv")).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn invalid_config_exits_1_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "team_sizes = [3]\n").unwrap();
    let out = pots(&["run", "--config", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("team_sizes"));
}

#[test]
fn missing_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = pots(&["run", "--config", "nope.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_round_trip_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    write_small_config(dir.path());
    let out = pots(
        &["run", "--config", "config.toml", "--out-dir", "out", "--no-plots"],
        dir.path(),
    );
    assert!(out.status.success());
    let out = pots(&["compare", "out/summary.csv", "--strict"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("6 repetitions x 120 rounds"), "{stdout}");
    assert!(stdout.contains("0 flagged"));
}

#[test]
fn compare_strict_flags_corrupted_results_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let csv = "team_size,attacker_ratio,win_rate_mean_pct,win_rate_std_pct,\
               theory_alpha_pow_n_pct,theory_exact_pct,max_streak_max,max_streak_mean,\
               total_computation_mean_s,nce\n\
               2,0.5,75.0,2.0,25.0,24.98,30,12.0,1000.0,\n";
    fs::write(dir.path().join("broken.csv"), csv).unwrap();
    let strict = pots(
        &["compare", "broken.csv", "--repetitions", "10", "--rounds", "300", "--strict"],
        dir.path(),
    );
    assert_eq!(strict.status.code(), Some(3));
    let lenient = pots(
        &["compare", "broken.csv", "--repetitions", "10", "--rounds", "300"],
        dir.path(),
    );
    assert_eq!(lenient.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&lenient.stdout).contains("1 flagged"));
}

#[test]
fn scenario_prints_cell_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = pots(
        &[
            "scenario", "--team-size", "2", "--alpha", "0.5", "--config", "config.toml",
            "--rounds", "150", "--repetitions", "5",
        ],
        {
            write_small_config(dir.path());
            dir.path()
        },
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("N=2 alpha=0.5 (40 attackers / 80 nodes, 40 teams)"));
    assert!(stdout.contains("max streak"));
}

#[test]
fn scenario_rejects_out_of_range_alpha_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = pots(&["scenario", "--team-size", "2", "--alpha", "1.5"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn theory_table_covers_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    write_small_config(dir.path());
    let out = pots(&["theory", "--config", "config.toml"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), 10, "header + 9 cells:\n{stdout}");
    assert!(stdout.contains("exact (%)"));
}

#[test]
fn theory_table_renders_tiny_probabilities_scientifically() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("deep.toml"),
        "team_sizes = [64]\nattacker_ratios = [0.2]\n",
    )
    .unwrap();
    let out = pots(&["theory", "--config", "deep.toml"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    // 0.2^64 is ~1.8e-43 %; the table switches to scientific notation
    assert!(stdout.contains("e-43"), "{stdout}");
}
