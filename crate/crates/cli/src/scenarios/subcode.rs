//! Random subcodes at the preset retention `p = 1 / (q^(eps n) L0)`.

use listop_core::codes::{is_list_decodable, min_list_bound};
use listop_core::col_ops::{draw_subcode, SizeSpec};
use listop_core::row_ops::Replacement;
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
    "N0",
    "rho",
    "L0",
    "p",
    "list_bound",
    "subcode_size",
    "distinct",
    "distinct_ok",
    "verdict",
    "witness_list_size",
];

fn default_trials() -> usize {
    200
}

fn default_samples() -> usize {
    4096
}

fn default_replacement() -> Replacement {
    Replacement::Without
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    #[serde(default = "super::estimate::default_eps")]
    eps: RatioParam,
    rho: RatioParam,
    /// List size of the base code at `rho`; computed exhaustively when absent.
    #[serde(rename = "L0")]
    l0: Option<usize>,
    p: Option<f64>,
    /// Defaults to `ceil(3 / eps)`.
    list_bound: Option<usize>,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_replacement")]
    replacement: Replacement,
    #[serde(default = "default_samples")]
    center_samples: usize,
}

pub fn run(ctx: &Ctx) -> CliResult<Table> {
    let prm: Params = ctx.cfg.params()?;
    let eps = prm.eps.f64();
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid("params.eps", format!("must lie in (0, 1], got {}", prm.eps.0)));
    }
    if prm.rho.0 > listop_core::ratio::ratio(1, 1) {
        return Err(invalid("params.rho", "must not exceed 1"));
    }
    if prm.trials == 0 {
        return Err(invalid("params.trials", "must be at least 1"));
    }
    let c0 = ctx.cfg.base_code(ctx.cap)?;
    let (q, n, big_n0) = (c0.q(), c0.n(), c0.len());
    let l0 = match prm.l0 {
        Some(0) => return Err(invalid("params.L0", "must be at least 1")),
        Some(l) => l,
        None => min_list_bound(&c0, prm.rho.0, ctx.cap)?,
    };
    let p = match prm.p {
        Some(p) if !(p > 0.0 && p <= 1.0) => return Err(invalid("params.p", format!("must lie in (0, 1], got {p}"))),
        Some(p) => p,
        None => 1.0 / ((q as f64).powf(eps * n as f64) * l0 as f64),
    };
    let list_bound = match prm.list_bound {
        Some(0) => return Err(invalid("params.list_bound", "must be at least 1")),
        Some(l) => l,
        None => (3.0 / eps - 1e-9).ceil() as usize,
    };
    let spec = SizeSpec::Fraction(p);
    if prm.replacement == Replacement::Without && spec.resolve(big_n0)? > big_n0 {
        return Err(invalid("params.p", "retention above 1 without replacement"));
    }

    let rows: Vec<_> = (0..prm.trials)
        .into_par_iter()
        .map(|i| {
            let seed = ctx.row_seed(i);
            let (sub, draw) = draw_subcode(&c0, spec, prm.replacement, seed)?;
            let mode = ctx.search_mode(q, n, prm.center_samples, seed);
            let rep = is_list_decodable(&sub, prm.rho.0, list_bound, mode, ctx.cap)?;
            let distinct = sub.distinct_count();
            Ok(vec![
                "subcode-ld".into(),
                i.into(),
                seed.into(),
                q.into(),
                n.into(),
                big_n0.into(),
                prm.rho.0.to_string().into(),
                l0.into(),
                p.into(),
                list_bound.into(),
                draw.size.into(),
                distinct.into(),
                (distinct as f64 >= p * big_n0 as f64 / 2.0).into(),
                verdict_label(rep.verdict).into(),
                rep.witness_list_size.into(),
            ])
        })
        .collect::<CliResult<_>>()?;
    let mut table = Table::new(COLUMNS);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
