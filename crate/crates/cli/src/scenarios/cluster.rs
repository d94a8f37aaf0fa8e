//! The clustered lower-bound construction and its subcode capture test.

use listop_core::codes::is_avg_radius_list_decodable;
use listop_core::constructions::{build_cluster_code, cluster_capture_trial, smallest_feasible_n};
use listop_core::{derive_seed, SearchMode};
use rayon::prelude::*;
use serde::Deserialize;

use super::estimate::verdict_label;
use super::Ctx;
use crate::config::RatioParam;
use crate::error::{invalid, CliResult};
use crate::output::Table;

pub const COLUMNS: &[&str] = &[
    "scenario_id",
    "trial",
    "seed",
    "q",
    "n",
    "rho",
    "N0",
    "cluster_size",
    "centers",
    "retries",
    "q_precondition_met",
    "avg_list_bound",
    "avg_verdict",
    "alpha",
    "subcode_size",
    "target",
    "captured",
    "certified_list_size",
];

fn default_rho() -> RatioParam {
    RatioParam(listop_core::ratio::ratio(1, 4))
}

fn default_q() -> u64 {
    2
}

fn default_alpha() -> f64 {
    1.0 / 32.0
}

fn default_trials() -> usize {
    20
}

fn default_samples() -> usize {
    64
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    #[serde(default = "default_rho")]
    rho: RatioParam,
    /// Defaults to the smallest block length with a non-empty cluster.
    n: Option<usize>,
    #[serde(default = "default_q")]
    q: u64,
    #[serde(default = "default_alpha")]
    alpha: f64,
    #[serde(default = "default_trials")]
    trials: usize,
    /// Defaults to `min(n, N0)`.
    avg_list_bound: Option<usize>,
    #[serde(default = "default_samples")]
    lambda_samples: usize,
}

pub fn run(ctx: &Ctx) -> CliResult<Table> {
    let prm: Params = ctx.cfg.params()?;
    if ctx.cfg.base_code.is_some() {
        return Err(invalid("base_code", "cluster-lb builds its own code; remove base_code"));
    }
    if !(prm.alpha > 0.0 && prm.alpha.is_finite()) {
        return Err(invalid("params.alpha", format!("must be positive, got {}", prm.alpha)));
    }
    if prm.trials == 0 {
        return Err(invalid("params.trials", "must be at least 1"));
    }
    let n = match prm.n {
        Some(n) => n,
        None => smallest_feasible_n(prm.rho.0).map_err(|e| invalid("params.rho", e))?,
    };
    listop_core::constructions::cluster_params(prm.rho.0, n, prm.q).map_err(|e| invalid("params", e))?;

    let rows: Vec<_> = (0..prm.trials)
        .into_par_iter()
        .map(|i| {
            let seed = ctx.row_seed(i);
            let cc = build_cluster_code(prm.rho.0, n, prm.q, seed)?;
            let big_n0 = cc.c0.len();
            let l = prm.avg_list_bound.unwrap_or(n.min(big_n0)).max(1);
            let mode = if ctx.subsets_fit(big_n0, l) {
                SearchMode::Exhaustive
            } else {
                SearchMode::Sampled { samples: prm.lambda_samples, seed: derive_seed(seed, "lambda", 0) }
            };
            let rep = is_avg_radius_list_decodable(&cc.c0, prm.rho.0, l, mode, ctx.cap)?;
            let cap = cluster_capture_trial(&cc, prm.alpha, derive_seed(seed, "capture", 0))?;
            let pp = &cc.params;
            Ok(vec![
                "cluster-lb".into(),
                i.into(),
                seed.into(),
                prm.q.into(),
                n.into(),
                prm.rho.0.to_string().into(),
                big_n0.into(),
                pp.cluster_size.into(),
                pp.centers.into(),
                cc.retries.into(),
                pp.q_precondition_met.into(),
                l.into(),
                verdict_label(rep.verdict).into(),
                prm.alpha.into(),
                cap.subcode_size.into(),
                cap.target.into(),
                cap.captured().into(),
                cap.certified_list_size.into(),
            ])
        })
        .collect::<CliResult<_>>()?;
    let mut table = Table::new(COLUMNS);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
