//! Experiment runner: config parsing, macroreplicated searches, CSV output
//! and summaries.

mod config;
mod run;
mod summary;

pub use config::{parse_config, parse_policy, ConfigError, ExperimentConfig, DEFAULT_DIMENSION, DEFAULT_OUT, DEFAULT_STRIDE};
pub use run::{
    aggregate, cell_stem, checkpoints, macrorep_seed, run_cell, run_experiment, write_aggregate_csv, write_trace_csv,
    AggregateRow, CellOutput, RunOptions, AGGREGATE_HEADER, TRACE_HEADER,
};
pub use summary::{summarize, summarize_file, write_summary, SummaryRow, SUMMARY_HEADER};

use std::path::PathBuf;

use crate::benchmarks::BenchmarkError;
use crate::search::SearchError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("cannot access {}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot read or write CSV {}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: schema mismatch: {message}", path.display())]
    Schema { path: PathBuf, message: String },
    #[error("no aggregate files given")]
    NoInput,
}
