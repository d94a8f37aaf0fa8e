use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use listop_cli::config::ExperimentConfig;
use listop_cli::scenarios::Scenario;
use listop_cli::{budget_from_env, run, RunOptions};

/// Run a list-decoding experiment and write its results as CSV.
///
/// Exit status: 0 on success, 2 for an invalid config or parameter, 3 when an
/// exhaustive search exceeds the enumeration budget (LISTOP_BUDGET), 1 for
/// I/O or construction failures.
#[derive(Parser, Debug)]
#[command(name = "listop", version, after_long_help = include_str!("../SCHEMA.md"))]
struct Args {
    scenario: Scenario,

    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,

    /// Master seed; overrides `master_seed` in the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Output CSV path; overrides `output` in the config. Stdout when neither is set.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = (|| {
        let cap = budget_from_env()?;
        let config = ExperimentConfig::load(&args.config)?;
        if args.threads == Some(0) {
            return Err(listop_cli::error::invalid("--threads", "must be at least 1"));
        }
        run(&RunOptions { scenario: args.scenario, config, seed: args.seed, out: args.out, threads: args.threads, cap })
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("listop: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
