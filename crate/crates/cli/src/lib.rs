//! Experiment harness: JSON configs in, CSV tables out.
//!
//! Every scenario is deterministic given its resolved config. Rows carry the
//! seed that reproduces them, and worker count never changes the output.

pub mod config;
pub mod error;
pub mod output;
pub mod scenarios;

use std::path::PathBuf;

pub use listop_core::derive_seed;
pub use listop_core::io::{load_code, save_code};

use config::ExperimentConfig;
use error::{invalid, CliError, CliResult};
use scenarios::{Ctx, Scenario};

/// Environment variable overriding the enumeration cap.
pub const BUDGET_ENV: &str = "LISTOP_BUDGET";

/// The cap from `LISTOP_BUDGET`, or the library default.
pub fn budget_from_env() -> CliResult<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| invalid(BUDGET_ENV, format!("expected a positive integer, got `{v}`"))),
        Err(_) => Ok(listop_core::codes::DEFAULT_CAP),
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub scenario: Scenario,
    pub config: ExperimentConfig,
    /// Overrides `master_seed`.
    pub seed: Option<u64>,
    /// Overrides `output`.
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub cap: u128,
}

/// Applies the command-line overrides and checks the scenario agrees.
pub fn resolve(opts: &RunOptions) -> CliResult<ExperimentConfig> {
    let mut cfg = opts.config.clone();
    match cfg.scenario {
        Some(s) if s != opts.scenario => {
            return Err(invalid("scenario", format!("config names `{}`, command line names `{}`", s.name(), opts.scenario.name())));
        }
        _ => cfg.scenario = Some(opts.scenario),
    }
    if let Some(seed) = opts.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &opts.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

/// Runs the scenario and renders the full output document.
pub fn render(opts: &RunOptions, unix_time: u64) -> CliResult<(ExperimentConfig, String)> {
    let cfg = resolve(opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Failed(format!("thread pool: {e}")))?;
    let ctx = Ctx { cfg: &cfg, cap: opts.cap };
    let table = pool.install(|| scenarios::run(opts.scenario, &ctx))?;
    // the output location is not part of the experiment
    let echo = ExperimentConfig { output: None, ..cfg.clone() };
    let echo = serde_json::to_string(&echo).map_err(|e| CliError::Failed(e.to_string()))?;
    let doc = output::render_document(opts.scenario.name(), &echo, unix_time, &table)?;
    Ok((cfg, doc))
}

/// Runs and writes the result to the configured output, or stdout when none is set.
pub fn run(opts: &RunOptions) -> CliResult<()> {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let (cfg, doc) = render(opts, now)?;
    match &cfg.output {
        Some(path) => output::write_atomic(path, &doc),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(doc.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
