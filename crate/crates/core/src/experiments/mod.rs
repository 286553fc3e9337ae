//! Seeded Monte Carlo studies over random graphs.
//!
//! A study expands its [`ExperimentConfig`] into a grid of `(n, m, trial)`
//! cells, runs each cell on its own derived seed in parallel, and
//! summarizes the [`TrialRecord`]s. Output is identical for any thread
//! count.

mod config;
mod emit;
mod record;
mod studies;
mod summary;

pub use config::{parse_seed, ExperimentConfig, Study, SEED_ENV};
pub use emit::{emit, emit_records, emit_summary, Format, StudyDocument, CODE_VERSION, JSON_SCHEMA, SCHEMA_VERSION};
pub use record::{read_records_csv, record_columns, write_records_csv, TrialRecord, CSV_SCHEMA_LINE};
pub use studies::{
    run_hitting_time_study, run_kcore_study, run_property_audit_study, run_resilience_sweep, run_study, run_trial,
    trial_grid, trial_seed, StudyOutput,
};
pub use summary::{quantile, summarize, wilson_interval, SummaryRow, SummaryTable, CHERRY_CROSSING};
