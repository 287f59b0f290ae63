use std::io;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};

use reactive_sampling::harness::{parse_config, run_experiment, summarize, write_summary, RunOptions};

#[derive(Parser)]
#[command(version, about = "Random local search with reactive sample-size comparisons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (step, policy) cell of an experiment config.
    Run {
        config: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run macroreplications one after another.
        #[arg(long)]
        sequential: bool,
    },
    /// Print a final-budget comparison table for aggregate CSVs.
    Summarize {
        #[arg(required = true)]
        aggregates: Vec<PathBuf>,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run { config, seed, out, sequential } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = parse_config(&text).with_context(|| format!("in {}", config.display()))?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(out) = out {
                cfg.out = out;
            }
            let options = RunOptions { parallel: !sequential && RunOptions::default().parallel };
            for cell in run_experiment(&cfg, options)? {
                println!("{}", cell.trace_path.display());
                println!("{}", cell.aggregate_path.display());
            }
        }
        Command::Summarize { aggregates } => {
            let rows = summarize(&aggregates)?;
            write_summary(io::stdout().lock(), &rows)?;
        }
    }
    Ok(())
}
