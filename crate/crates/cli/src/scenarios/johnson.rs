//! Johnson-bound audit on random index sets of the base code, one row per
//! (instance, variant).

use listop_core::bounds::{johnson_rhs, JohnsonVariant};
use listop_core::codes::{hamming_distance, max_agreement_sum};
use listop_core::col_ops::{draw_subcode, SizeSpec};
use listop_core::row_ops::Replacement;
use rayon::prelude::*;
use serde::Deserialize;

use super::Ctx;
use crate::error::{invalid, CliResult};
use crate::output::{Cell, Table};

pub const COLUMNS: &[&str] = &[
    "scenario_id",
    "instance",
    "seed",
    "q",
    "n",
    "L",
    "lambda",
    "sum_pairwise",
    "variant",
    "lhs",
    "rhs",
    "holds",
];

fn default_l() -> usize {
    3
}

fn default_instances() -> usize {
    1000
}

fn default_eps_values() -> Vec<f64> {
    vec![0.25, 0.5]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    #[serde(rename = "L", default = "default_l")]
    l: usize,
    #[serde(default = "default_instances")]
    instances: usize,
    /// Values of `eps` for the eps-parametrized variant.
    #[serde(default = "default_eps_values")]
    eps_values: Vec<f64>,
}

pub fn run(ctx: &Ctx) -> CliResult<Table> {
    let prm: Params = ctx.cfg.params()?;
    let c0 = ctx.cfg.base_code(ctx.cap)?;
    if prm.l == 0 || prm.l > c0.len() {
        return Err(invalid("params.L", format!("must lie in [1, N = {}], got {}", c0.len(), prm.l)));
    }
    if prm.instances == 0 {
        return Err(invalid("params.instances", "must be at least 1"));
    }
    if let Some(e) = prm.eps_values.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
        return Err(invalid("params.eps_values", format!("{e} outside (0, 1)")));
    }
    let (q, n) = (c0.q(), c0.n());
    let mut variants: Vec<(String, JohnsonVariant)> = Vec::new();
    if q == 2 {
        variants.push(("binary".into(), JohnsonVariant::Binary));
    }
    for &e in &prm.eps_values {
        variants.push((format!("q_eps({e})"), JohnsonVariant::QEps(e)));
    }
    variants.push(("q_sqrt".into(), JohnsonVariant::QSqrt));

    let blocks: Vec<Vec<Vec<Cell>>> = (0..prm.instances)
        .into_par_iter()
        .map(|i| {
            let seed = ctx.row_seed(i);
            let (_, draw) = draw_subcode(&c0, SizeSpec::Count(prm.l), Replacement::Without, seed)?;
            let lam = draw.indices;
            let mut sum = 0usize;
            for (a, &x) in lam.iter().enumerate() {
                for &y in &lam[a + 1..] {
                    sum += hamming_distance(c0.codeword(x), c0.codeword(y))?;
                }
            }
            // ordered pairs, relative distances
            let sum_pairwise = 2.0 * sum as f64 / n as f64;
            let lhs = max_agreement_sum(&c0, &lam)?;
            let lam_text = lam.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
            variants
                .iter()
                .map(|(name, v)| {
                    let rhs = johnson_rhs(*v, n, prm.l, q, sum_pairwise)?;
                    Ok(vec![
                        "johnson-audit".into(),
                        i.into(),
                        seed.into(),
                        q.into(),
                        n.into(),
                        prm.l.into(),
                        lam_text.clone().into(),
                        sum_pairwise.into(),
                        name.clone().into(),
                        lhs.into(),
                        rhs.into(),
                        (lhs as f64 <= rhs + 1e-9).into(),
                    ])
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<_>>()?;
    let mut table = Table::new(COLUMNS);
    blocks.into_iter().flatten().for_each(|r| table.push(r));
    Ok(table)
}
