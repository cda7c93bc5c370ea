//! Batch reporting: config ingestion, CSV/JSON emission, static SVG figures,
//! theory comparison, and the run manifest.

pub mod compare;
pub mod config;
pub mod figures;
pub mod manifest;
pub mod plot;
pub mod records;

pub use compare::{compare_to_theory, TheoryComparison};
pub use config::{load_config, parse_config};
pub use figures::{emit_plots, nce_chart, streak_chart, win_rate_chart, PlotOptions, PlotOutcome};
pub use manifest::RunManifest;
pub use records::{build_records, emit_csv, emit_json, parse_csv, SummaryRecord};
