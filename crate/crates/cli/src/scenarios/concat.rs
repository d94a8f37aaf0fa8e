//! Outer code concatenated with Hadamard, decoded after deterministic corruption.

use listop_core::concat::{concat_list_decode, corrupt, default_outer_radius, ConcatCode, CorruptionPattern};
use listop_core::derive_seed;
use rand::Rng as _;
use rayon::prelude::*;
use serde::Deserialize;

use super::Ctx;
use crate::config::RatioParam;
use crate::error::{invalid, CliResult};
use crate::output::Table;

pub const COLUMNS: &[&str] = &[
    "scenario_id",
    "trial",
    "seed",
    "q_out",
    "n_out",
    "N",
    "inner_k",
    "eps",
    "corruption",
    "pattern",
    "outer_radius",
    "message",
    "recovered",
    "candidates",
    "max_inner_list",
    "inner_list_limit",
];

fn default_eps() -> RatioParam {
    RatioParam(listop_core::ratio::ratio(1, 2))
}

fn default_trials() -> usize {
    500
}

fn default_pattern() -> CorruptionPattern {
    CorruptionPattern::Concentrated
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    inner_k: u32,
    #[serde(default = "default_eps")]
    eps: RatioParam,
    /// Fraction of flipped bits; defaults to `max(0, 1/2 - eps)`.
    corruption: Option<f64>,
    #[serde(default = "default_pattern")]
    pattern: CorruptionPattern,
    /// Defaults to `1 - eps^3 / 8`.
    outer_radius: Option<f64>,
    #[serde(default = "default_trials")]
    trials: usize,
}

pub fn run(ctx: &Ctx) -> CliResult<Table> {
    let prm: Params = ctx.cfg.params()?;
    let eps = prm.eps.f64();
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid("params.eps", format!("must lie in (0, 1], got {}", prm.eps.0)));
    }
    let corruption = prm.corruption.unwrap_or((0.5 - eps).max(0.0));
    if !(0.0..=1.0).contains(&corruption) {
        return Err(invalid("params.corruption", format!("must lie in [0, 1], got {corruption}")));
    }
    let outer_radius = prm.outer_radius.unwrap_or_else(|| default_outer_radius(eps));
    if !(0.0..=1.0).contains(&outer_radius) {
        return Err(invalid("params.outer_radius", format!("must lie in [0, 1], got {outer_radius}")));
    }
    if prm.trials == 0 {
        return Err(invalid("params.trials", "must be at least 1"));
    }
    let outer = ctx.cfg.base_code(ctx.cap)?;
    let code = ConcatCode::new(outer, prm.inner_k).map_err(|e| invalid("params.inner_k", e))?;
    let (q_out, n_out, big_n) = (code.outer().q(), code.outer().n(), code.outer().len());
    let limit = 8.0 / (eps * eps);
    let pattern = match prm.pattern {
        CorruptionPattern::Concentrated => "concentrated",
        CorruptionPattern::Spread => "spread",
    };

    let rows: Vec<_> = (0..prm.trials)
        .into_par_iter()
        .map(|i| {
            let seed = ctx.row_seed(i);
            let message = listop_core::seed::rng(derive_seed(seed, "message", 0)).random_range(0..big_n);
            let y = corrupt(&code, message, corruption, prm.pattern)?;
            let res = concat_list_decode(&code, &y, eps, seed, outer_radius)?;
            let max_inner = res.inner_list_sizes.iter().copied().max().unwrap_or(0);
            Ok(vec![
                "concat-decode".into(),
                i.into(),
                seed.into(),
                q_out.into(),
                n_out.into(),
                big_n.into(),
                prm.inner_k.into(),
                eps.into(),
                corruption.into(),
                pattern.into(),
                outer_radius.into(),
                message.into(),
                res.candidates.contains(&message).into(),
                res.candidates.len().into(),
                max_inner.into(),
                limit.into(),
            ])
        })
        .collect::<CliResult<_>>()?;
    let mut table = Table::new(COLUMNS);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
