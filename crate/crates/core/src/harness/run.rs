use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::benchmarks::BenchmarkSpec;
use crate::oracle::{NoisyBenchmark, SeedStream};
use crate::policy::{Comparator, Direction, Policy};
use crate::search::{run_search, SearchParams, SearchTrace};

use super::{ExperimentConfig, HarnessError};

pub const TRACE_HEADER: [&str; 4] = ["macrorep", "spent", "best_noiseless", "comparison_samples"];
pub const AGGREGATE_HEADER: [&str; 4] =
    ["spent", "mean_best_noiseless", "stderr_best_noiseless", "mean_comparison_samples"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Run macroreplications on the rayon pool. Ignored without the
    /// `parallel` feature.
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { parallel: cfg!(feature = "parallel") }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub spent: u64,
    pub mean_best_noiseless: f64,
    pub stderr_best_noiseless: f64,
    pub mean_comparison_samples: f64,
}

#[derive(Debug, Clone)]
pub struct CellOutput {
    pub step: f64,
    pub policy: Policy,
    pub traces: Vec<SearchTrace>,
    pub aggregate: Vec<AggregateRow>,
    pub trace_path: PathBuf,
    pub aggregate_path: PathBuf,
}

/// Master seed of macroreplication `m`.
pub fn macrorep_seed(master: u64, m: u32) -> u64 {
    SeedStream::new(master).child(u64::from(m)).master_seed()
}

/// `min(k * stride, budget)` for `k = 0..=ceil(budget / stride)`.
pub fn checkpoints(budget: u64, stride: u64) -> Vec<u64> {
    (0..=budget.div_ceil(stride)).map(|k| (k * stride).min(budget)).collect()
}

/// Runs every macroreplication of one (step, policy) cell.
pub fn run_cell(
    config: &ExperimentConfig,
    step: f64,
    policy: &Policy,
    options: RunOptions,
) -> Result<Vec<SearchTrace>, HarnessError> {
    let spec = BenchmarkSpec::new(config.function, config.dimension, config.noise)?;
    let objective = NoisyBenchmark::new(spec);
    let params = SearchParams::new(step, objective.spec().bounds(), config.budget)?;
    let one = |m: u32| -> Result<SearchTrace, HarnessError> {
        let mut comparator = Comparator::new(policy.clone(), Direction::Minimize).map_err(crate::search::SearchError::from)?;
        Ok(run_search(&objective, &mut comparator, &params, macrorep_seed(config.seed, m))?)
    };

    #[cfg(feature = "parallel")]
    if options.parallel {
        use rayon::prelude::*;
        return (0..config.macroreps).into_par_iter().map(one).collect();
    }
    let _ = options;
    (0..config.macroreps).map(one).collect()
}

/// Carries each trace forward onto the checkpoint grid and averages across
/// macroreplications.
pub fn aggregate(traces: &[SearchTrace], budget: u64, stride: u64) -> Vec<AggregateRow> {
    let m = traces.len() as f64;
    checkpoints(budget, stride)
        .into_iter()
        .map(|c| {
            let carried: Vec<_> = traces
                .iter()
                .map(|t| {
                    let idx = t.points.partition_point(|p| p.spent <= c);
                    &t.points[idx.saturating_sub(1)]
                })
                .collect();
            let mean = carried.iter().map(|p| p.best_noiseless).sum::<f64>() / m;
            let stderr = if traces.len() > 1 {
                let var = carried.iter().map(|p| (p.best_noiseless - mean).powi(2)).sum::<f64>() / (m - 1.0);
                (var / m).sqrt()
            } else {
                0.0
            };
            AggregateRow {
                spent: c,
                mean_best_noiseless: mean,
                stderr_best_noiseless: stderr,
                mean_comparison_samples: carried.iter().map(|p| p.comparison_samples as f64).sum::<f64>() / m,
            }
        })
        .collect()
}

pub fn write_trace_csv<W: Write>(writer: W, traces: &[SearchTrace]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TRACE_HEADER)?;
    for (m, trace) in traces.iter().enumerate() {
        for p in &trace.points {
            w.write_record([
                m.to_string(),
                p.spent.to_string(),
                p.best_noiseless.to_string(),
                p.comparison_samples.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate_csv<W: Write>(writer: W, rows: &[AggregateRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(AGGREGATE_HEADER)?;
    for r in rows {
        w.write_record([
            r.spent.to_string(),
            r.mean_best_noiseless.to_string(),
            r.stderr_best_noiseless.to_string(),
            r.mean_comparison_samples.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// File stem shared by a cell's trace and aggregate files.
pub fn cell_stem(config: &ExperimentConfig, step: f64, policy_index: usize) -> String {
    let label = config.policies[policy_index].label();
    let clashes = config.policies.iter().filter(|p| p.label() == label).count() > 1;
    let label = if clashes { format!("{label}-{}", policy_index + 1) } else { label };
    format!(
        "{}_d{}_noise{}_step{}_{}",
        config.function.name(),
        config.dimension,
        config.noise,
        step,
        label
    )
}

fn write_file(path: &Path, write: impl FnOnce(fs::File) -> Result<(), csv::Error>) -> Result<(), HarnessError> {
    let file = fs::File::create(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    write(file).map_err(|source| HarnessError::Csv { path: path.to_path_buf(), source })
}

/// Runs every (step, policy) cell and writes a trace and an aggregate CSV per
/// cell into `config.out`.
pub fn run_experiment(config: &ExperimentConfig, options: RunOptions) -> Result<Vec<CellOutput>, HarnessError> {
    fs::create_dir_all(&config.out).map_err(|source| HarnessError::Io { path: config.out.clone(), source })?;
    let mut outputs = Vec::new();
    for &step in &config.steps {
        for (j, policy) in config.policies.iter().enumerate() {
            let traces = run_cell(config, step, policy, options)?;
            let aggregate = aggregate(&traces, config.budget, config.stride);
            let stem = cell_stem(config, step, j);
            let trace_path = config.out.join(format!("{stem}_trace.csv"));
            let aggregate_path = config.out.join(format!("{stem}_aggregate.csv"));
            write_file(&trace_path, |f| write_trace_csv(std::io::BufWriter::new(f), &traces))?;
            write_file(&aggregate_path, |f| write_aggregate_csv(std::io::BufWriter::new(f), &aggregate))?;
            outputs.push(CellOutput { step, policy: policy.clone(), traces, aggregate, trace_path, aggregate_path });
        }
    }
    Ok(outputs)
}
