//! Paired comparison of row operations drawn with and without replacement.

use listop_core::expectation::{replacement_dominance_test, DominancePair};
use listop_core::RowOpParams;
use serde::Deserialize;

use super::{default_one, Ctx};
use crate::error::{invalid, CliResult};
use crate::output::Table;

pub const COLUMNS: &[&str] = &[
    "scenario_id",
    "pair",
    "n0",
    "n",
    "t",
    "N",
    "L",
    "trials",
    "seed",
    "mean_with",
    "mean_without",
    "delta",
    "paired_std_err",
    "z_score",
    "dominated",
];

fn default_l() -> usize {
    2
}

fn default_trials() -> usize {
    200
}

fn default_k() -> f64 {
    3.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    /// Both pairs when absent.
    pair: Option<DominancePair>,
    /// Output length for sampling vs puncturing; defaults to `max(1, n0 / 2)`.
    n: Option<usize>,
    /// Block size for aggregation vs folding; defaults to the smallest divisor of `n0` above 1.
    t: Option<usize>,
    #[serde(rename = "L", default = "default_l")]
    l: usize,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_one")]
    repeats: usize,
    /// Tolerance in paired standard errors.
    #[serde(default = "default_k")]
    k: f64,
}

fn pair_name(p: DominancePair) -> &'static str {
    match p {
        DominancePair::SamplingVsPuncturing => "sampling-vs-puncturing",
        DominancePair::AggregateVsFold => "aggregate-vs-fold",
    }
}

pub fn run(ctx: &Ctx) -> CliResult<Table> {
    let prm: Params = ctx.cfg.params()?;
    let c0 = ctx.cfg.base_code(ctx.cap)?;
    let n0 = c0.n();
    if prm.l == 0 || prm.l > c0.len() {
        return Err(invalid("params.L", format!("must lie in [1, N = {}], got {}", c0.len(), prm.l)));
    }
    if prm.trials < 2 {
        return Err(invalid("params.trials", "must be at least 2"));
    }
    if prm.repeats == 0 {
        return Err(invalid("params.repeats", "must be at least 1"));
    }
    let pairs = match prm.pair {
        Some(p) => vec![p],
        None => vec![DominancePair::SamplingVsPuncturing, DominancePair::AggregateVsFold],
    };
    let mut table = Table::new(COLUMNS);
    let mut row = 0;
    for pair in pairs {
        let params = match pair {
            DominancePair::SamplingVsPuncturing => {
                let n = prm.n.unwrap_or((n0 / 2).max(1));
                if n == 0 || n > n0 {
                    return Err(invalid("params.n", format!("must lie in [1, n0 = {n0}], got {n}")));
                }
                RowOpParams::new(n0, n, 1)
            }
            DominancePair::AggregateVsFold => {
                let t = match prm.t {
                    Some(t) => t,
                    None => (2..=n0).find(|t| n0 % t == 0).unwrap_or(1),
                };
                if t == 0 || n0 % t != 0 {
                    return Err(invalid("params.t", format!("t = {t} does not divide n0 = {n0}")));
                }
                RowOpParams::new(n0, n0 / t, t)
            }
        };
        for _ in 0..prm.repeats {
            let seed = ctx.row_seed(row);
            row += 1;
            let r = replacement_dominance_test(&c0, pair, &params, prm.l, prm.trials, seed, ctx.cap)?;
            table.push(vec![
                "replacement-test".into(),
                pair_name(pair).into(),
                n0.into(),
                params.n.into(),
                params.t.into(),
                c0.len().into(),
                prm.l.into(),
                prm.trials.into(),
                seed.into(),
                r.mean_with.into(),
                r.mean_without.into(),
                r.delta.into(),
                r.paired_std_err.into(),
                r.z_score.into(),
                r.dominated_within(prm.k).into(),
            ]);
        }
    }
    Ok(table)
}
