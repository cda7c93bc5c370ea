//! Assembles the three sweep figures: attacker win rate, NCE, and maximum
//! consecutive attacker wins, each against team size.
//!
//! The chart builders work on flat [`SummaryRecord`]s and return `None` when
//! the data cannot support the figure; [`emit_plots`] turns that into
//! skip-with-warning behavior.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Result, SimError};
use crate::harness::ScenarioSummary;
use crate::report::plot::{LineChart, Series};
use crate::report::records::{build_records, SummaryRecord};

#[derive(Clone, Copy, Debug, Default)]
pub struct PlotOptions {
    /// Log-scale the win-rate y axis.
    pub log_y_win_rate: bool,
}

/// What `emit_plots` produced. Charts without enough data are skipped with a
/// warning rather than failing the run (strict mode handling is the CLI's).
#[derive(Clone, Debug, Default)]
pub struct PlotOutcome {
    pub written: Vec<PathBuf>,
    pub skipped: Vec<String>,
}

fn alpha_label(alpha: f64) -> String {
    format!("α = {alpha}")
}

fn team_sizes(records: &[SummaryRecord]) -> BTreeSet<u32> {
    records.iter().map(|r| r.team_size).collect()
}

fn sorted_alphas(records: &[SummaryRecord]) -> Vec<f64> {
    let mut alphas: Vec<f64> = Vec::new();
    for r in records {
        if !alphas.contains(&r.attacker_ratio) {
            alphas.push(r.attacker_ratio);
        }
    }
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    alphas
}

/// alpha = 0 and alpha = 1 are trivial cases and stay out of the figures.
fn nontrivial_alphas(records: &[SummaryRecord]) -> Vec<f64> {
    sorted_alphas(records)
        .into_iter()
        .filter(|&a| a > 0.0 && a < 1.0)
        .collect()
}

fn team_size_ticks(sizes: &BTreeSet<u32>) -> Vec<(f64, String)> {
    sizes
        .iter()
        .map(|&n| (f64::from(n).log2(), n.to_string()))
        .collect()
}

fn series_points(
    records: &[SummaryRecord],
    alpha: f64,
    value: impl Fn(&SummaryRecord) -> Option<f64>,
) -> Vec<(f64, f64)> {
    let mut points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.attacker_ratio == alpha)
        .filter_map(|r| value(r).map(|v| (f64::from(r.team_size).log2(), v)))
        .collect();
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    points
}

/// Attacker win rate vs team size, one series per nontrivial alpha.
pub fn win_rate_chart(records: &[SummaryRecord], log_y: bool) -> Option<LineChart> {
    let sizes = team_sizes(records);
    let alphas = nontrivial_alphas(records);
    if sizes.len() < 2 || alphas.is_empty() {
        return None;
    }
    Some(LineChart {
        title: "Attacker win rate vs. team size".to_string(),
        x_label: "Team size N".to_string(),
        y_label: "Attacker win rate (%)".to_string(),
        x_ticks: team_size_ticks(&sizes),
        log_y,
        series: alphas
            .iter()
            .map(|&alpha| {
                Series::new(
                    alpha_label(alpha),
                    series_points(records, alpha, |r| Some(r.win_rate_mean_pct)),
                )
            })
            .collect(),
    })
}

/// NCE vs team size at alpha = 0.5 when present, otherwise one series per
/// ratio that has a team-size-1 baseline. A dashed `N` reference line shows
/// the ideal scaling.
pub fn nce_chart(records: &[SummaryRecord]) -> Option<LineChart> {
    let sizes = team_sizes(records);
    if sizes.len() < 2 {
        return None;
    }
    let alphas = sorted_alphas(records);
    let nce_alphas: Vec<f64> = if alphas.contains(&0.5) {
        vec![0.5]
    } else {
        alphas
            .into_iter()
            .filter(|&a| records.iter().any(|r| r.attacker_ratio == a && r.nce.is_some()))
            .collect()
    };
    if nce_alphas.is_empty()
        || !records
            .iter()
            .any(|r| nce_alphas.contains(&r.attacker_ratio) && r.nce.is_some())
    {
        return None;
    }
    let mut series: Vec<Series> = nce_alphas
        .iter()
        .map(|&alpha| {
            Series::new(
                format!("NCE, {}", alpha_label(alpha)),
                series_points(records, alpha, |r| r.nce),
            )
        })
        .collect();
    series.push(
        Series::new(
            "ideal N",
            sizes
                .iter()
                .map(|&n| (f64::from(n).log2(), f64::from(n)))
                .collect(),
        )
        .dashed(),
    );
    Some(LineChart {
        title: "Normalized computation efficiency vs. team size".to_string(),
        x_label: "Team size N".to_string(),
        y_label: "NCE = T1 / TN".to_string(),
        x_ticks: team_size_ticks(&sizes),
        log_y: false,
        series,
    })
}

/// Maximum consecutive attacker wins vs team size. Both readings of the
/// aggregate are plotted: max over repetitions (solid) and mean (dashed).
pub fn streak_chart(records: &[SummaryRecord]) -> Option<LineChart> {
    let sizes = team_sizes(records);
    let alphas = nontrivial_alphas(records);
    if sizes.len() < 2 || alphas.is_empty() {
        return None;
    }
    let mut series = Vec::new();
    for &alpha in &alphas {
        series.push(Series::new(
            format!("{} (max)", alpha_label(alpha)),
            series_points(records, alpha, |r| Some(f64::from(r.max_streak_max))),
        ));
    }
    for &alpha in &alphas {
        series.push(
            Series::new(
                format!("{} (mean)", alpha_label(alpha)),
                series_points(records, alpha, |r| Some(r.max_streak_mean)),
            )
            .dashed(),
        );
    }
    Some(LineChart {
        title: "Maximum consecutive attacker wins vs. team size".to_string(),
        x_label: "Team size N".to_string(),
        y_label: "Max consecutive attacker wins".to_string(),
        x_ticks: team_size_ticks(&sizes),
        log_y: false,
        series,
    })
}

/// Writes the three static SVG figures into `out_dir`.
pub fn emit_plots(
    summaries: &[ScenarioSummary],
    out_dir: &Path,
    options: PlotOptions,
) -> Result<PlotOutcome> {
    let records = build_records(summaries);
    let mut outcome = PlotOutcome::default();
    let figures: [(&str, Option<LineChart>, &str); 3] = [
        (
            "win_rate_vs_team_size.svg",
            win_rate_chart(&records, options.log_y_win_rate),
            "win-rate plot needs two team sizes and a ratio strictly between 0 and 1",
        ),
        (
            "nce_vs_team_size.svg",
            nce_chart(&records),
            "NCE plot needs two team sizes and a team-size-1 baseline",
        ),
        (
            "max_streak_vs_team_size.svg",
            streak_chart(&records),
            "streak plot needs two team sizes and a ratio strictly between 0 and 1",
        ),
    ];
    for (name, chart, skip_reason) in figures {
        match chart {
            Some(chart) => {
                let path = out_dir.join(name);
                fs::write(&path, chart.to_svg()).map_err(|e| SimError::io(&path, e))?;
                outcome.written.push(path);
            }
            None => outcome.skipped.push(format!("{name}: {skip_reason}")),
        }
    }
    Ok(outcome)
}
