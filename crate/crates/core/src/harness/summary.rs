use std::io::Write;
use std::path::{Path, PathBuf};

use super::run::AGGREGATE_HEADER;
use super::HarnessError;

pub const SUMMARY_HEADER: [&str; 5] =
    ["source", "final_spent", "mean_best_noiseless", "stderr_best_noiseless", "mean_comparison_samples"];

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    /// Aggregate file stem without the `_aggregate` suffix.
    pub source: String,
    pub final_spent: u64,
    pub mean_best_noiseless: f64,
    pub stderr_best_noiseless: f64,
    /// Mean of `mean_comparison_samples` over checkpoints past zero.
    pub mean_comparison_samples: f64,
}

fn schema(path: &Path, message: impl Into<String>) -> HarnessError {
    HarnessError::Schema { path: path.to_path_buf(), message: message.into() }
}

pub fn summarize_file(path: &Path) -> Result<SummaryRow, HarnessError> {
    let mut reader = csv::Reader::from_path(path).map_err(|source| HarnessError::Csv { path: path.to_path_buf(), source })?;
    let headers = reader.headers().map_err(|source| HarnessError::Csv { path: path.to_path_buf(), source })?;
    if headers.iter().ne(AGGREGATE_HEADER) {
        return Err(schema(path, format!("expected header `{}`", AGGREGATE_HEADER.join(","))));
    }

    let mut last = None;
    let (mut samples_sum, mut samples_rows) = (0.0, 0usize);
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|source| HarnessError::Csv { path: path.to_path_buf(), source })?;
        let row = i + 2;
        let field = |k: usize| record.get(k).ok_or_else(|| schema(path, format!("row {row}: missing column {}", k + 1)));
        let spent: u64 = field(0)?.parse().map_err(|_| schema(path, format!("row {row}: bad spent")))?;
        let num = |k: usize| -> Result<f64, HarnessError> {
            field(k)?.parse().map_err(|_| schema(path, format!("row {row}: bad {}", AGGREGATE_HEADER[k])))
        };
        let (mean, stderr, samples) = (num(1)?, num(2)?, num(3)?);
        if spent > 0 {
            samples_sum += samples;
            samples_rows += 1;
        }
        last = Some((spent, mean, stderr));
    }
    let (final_spent, mean, stderr) = last.ok_or_else(|| schema(path, "no data rows"))?;

    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(SummaryRow {
        source: stem.strip_suffix("_aggregate").unwrap_or(&stem).to_string(),
        final_spent,
        mean_best_noiseless: mean,
        stderr_best_noiseless: stderr,
        mean_comparison_samples: if samples_rows > 0 { samples_sum / samples_rows as f64 } else { 0.0 },
    })
}

pub fn summarize(paths: &[PathBuf]) -> Result<Vec<SummaryRow>, HarnessError> {
    if paths.is_empty() {
        return Err(HarnessError::NoInput);
    }
    paths.iter().map(|p| summarize_file(p)).collect()
}

pub fn write_summary<W: Write>(writer: W, rows: &[SummaryRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.source.clone(),
            r.final_spent.to_string(),
            r.mean_best_noiseless.to_string(),
            r.stderr_best_noiseless.to_string(),
            r.mean_comparison_samples.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
