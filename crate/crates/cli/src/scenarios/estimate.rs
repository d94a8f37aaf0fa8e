//! Expectation estimates for random row operations: the `xor-ld`, `fold-ld`,
//! `aggregate-ld` and `estimate-E` scenarios share one row layout.

use listop_core::codes::{code_min_distance, is_list_decodable, SearchOptions};
use listop_core::expectation::{
    estimate_e, estimate_e_fixed, estimate_reversed, fit_main_constant, main_bound, trial_seed, xor_lemma_bound, LambdaMode,
    MainBoundParams,
};
use listop_core::ratio::{big_to_f64, to_f64};
use listop_core::row_ops::{apply_row_op, draw_row_operation, injectivity_failure_bound, validate_params};
use listop_core::{CodeMatrix, EstimateSummary, RowOpKind, RowOpParams};
use serde::Deserialize;

use super::{default_one, preset_t, preset_xor_n, Ctx};
use crate::config::RatioParam;
use crate::error::{invalid, CliResult};
use crate::output::{Cell, Table};

pub const COLUMNS: &[&str] = &[
    "scenario_id",
    "kind",
    "n0",
    "n",
    "N",
    "L",
    "t",
    "trials",
    "seed",
    "mean",
    "std_dev",
    "bound",
    "fitted_C",
    "mode",
    "lambda",
    "identity_checked",
    "delta0",
    "distinct",
    "union_bound",
    "paper_bound",
    "reversed_mean",
    "ld_radius",
    "ld_verdict",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum LambdaSearch {
    /// Exact when `C(N, L) * trials` fits the budget, heuristic otherwise.
    #[default]
    Auto,
    Exact,
    Heuristic,
}

pub(super) fn default_eps() -> RatioParam {
    RatioParam(listop_core::ratio::ratio(1, 4))
}

fn default_trials() -> usize {
    100
}

fn default_samples() -> usize {
    4096
}

fn default_c_fit() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowOpLdParams {
    #[serde(default = "default_eps")]
    eps: RatioParam,
    #[serde(rename = "L")]
    l: Option<usize>,
    t: Option<usize>,
    n: Option<usize>,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_one")]
    repeats: usize,
    #[serde(default)]
    lambda_search: LambdaSearch,
    /// When set, the trial-0 image is checked for `(rho, L)`-list decodability.
    rho: Option<RatioParam>,
    #[serde(default = "default_samples")]
    center_samples: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EstimateParams {
    kind: RowOpKind,
    #[serde(default = "default_eps")]
    eps: RatioParam,
    #[serde(rename = "L")]
    l: Option<usize>,
    /// Fixed index set; overrides the search over sets.
    lambda: Option<Vec<usize>>,
    t: Option<usize>,
    n: Option<usize>,
    /// Field order for `hash_reduce`; the code alphabet must be a power of it.
    hash_q: Option<u64>,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_one")]
    repeats: usize,
    #[serde(default)]
    lambda_search: LambdaSearch,
    /// Also estimate the reversed quantity and fit the main-bound constant.
    #[serde(default)]
    reversed: bool,
    #[serde(default = "default_c_fit")]
    c_fit: f64,
}

fn check_common(eps: RatioParam, trials: usize, repeats: usize) -> CliResult<f64> {
    let e = eps.f64();
    if !(e > 0.0 && e <= 1.0) {
        return Err(invalid("params.eps", format!("must lie in (0, 1], got {}", eps.0)));
    }
    if trials == 0 {
        return Err(invalid("params.trials", "must be at least 1"));
    }
    if repeats == 0 {
        return Err(invalid("params.repeats", "must be at least 1"));
    }
    Ok(e)
}

fn check_l(l: usize, big_n: usize) -> CliResult<()> {
    if l == 0 || l > big_n {
        return Err(invalid("params.L", format!("must lie in [1, N = {big_n}], got {l}")));
    }
    Ok(())
}

fn delta0(c0: &CodeMatrix) -> Option<f64> {
    code_min_distance(c0).ok().map(to_f64)
}

/// Resolves `(t, n)` for `kind`, applying the presets where not given.
fn resolve_shape(c0: &CodeMatrix, kind: RowOpKind, eps: f64, t: Option<usize>, n: Option<usize>) -> CliResult<(usize, usize)> {
    let n0 = c0.n();
    let needs_t = matches!(kind, RowOpKind::Xor | RowOpKind::Aggregate | RowOpKind::Fold);
    let t = match (needs_t, t) {
        (false, _) => 1,
        (true, Some(t)) => {
            if t == 0 || t > n0 {
                return Err(invalid("params.t", format!("must lie in [1, n0 = {n0}], got {t}")));
            }
            if kind == RowOpKind::Fold && !n0.is_multiple_of(t) {
                return Err(invalid("params.t", format!("t = {t} does not divide n0 = {n0}")));
            }
            t
        }
        (true, None) => {
            let d = delta0(c0).ok_or_else(|| invalid("params.t", "preset needs two distinct codewords; set t explicitly"))?;
            let mut t = preset_t(eps, d, n0);
            if kind == RowOpKind::Fold {
                // smallest divisor of n0 not below the preset
                while !n0.is_multiple_of(t) {
                    t += 1;
                }
            }
            t
        }
    };
    let n = match (kind, n) {
        (RowOpKind::Fold, Some(n)) if n * t != n0 => {
            return Err(invalid("params.n", format!("folding needs n = n0 / t = {}, got {n}", n0 / t)));
        }
        (RowOpKind::HashReduce, Some(n)) if n != n0 => {
            return Err(invalid("params.n", format!("hash reduction keeps n = n0 = {n0}, got {n}")));
        }
        (RowOpKind::Puncturing, Some(n)) if n > n0 => {
            return Err(invalid("params.n", format!("puncturing needs n <= n0 = {n0}, got {n}")));
        }
        (_, Some(0)) => return Err(invalid("params.n", "must be at least 1")),
        (_, Some(n)) => n,
        (RowOpKind::Xor, None) => preset_xor_n(c0.len(), eps),
        (RowOpKind::Fold | RowOpKind::Aggregate, None) => (n0 / t).max(1),
        (RowOpKind::HashReduce, None) => n0,
        (RowOpKind::Sampling | RowOpKind::Puncturing, None) => (n0 / 2).max(1),
    };
    Ok((t, n))
}

fn row_params(c0: &CodeMatrix, kind: RowOpKind, t: usize, n: usize, hash_q: Option<u64>) -> CliResult<RowOpParams> {
    let mut p = RowOpParams::new(c0.n(), n, t);
    match kind {
        RowOpKind::Xor => {
            if !c0.alphabet().is_prime_field() {
                return Err(invalid("base_code", format!("xor needs a prime alphabet, got q = {}", c0.q())));
            }
            p = p.with_field(c0.q());
        }
        RowOpKind::HashReduce => {
            let hq = hash_q.ok_or_else(|| invalid("params.hash_q", "required for hash_reduce"))?;
            let k = (1..=64u32).find(|&k| hq.checked_pow(k) == Some(c0.q()));
            let k = k.filter(|_| hq >= 2).ok_or_else(|| {
                invalid("params.hash_q", format!("code alphabet {} is not a power of {hq}", c0.q()))
            })?;
            p = p.with_field(hq).with_k(k);
        }
        _ => {}
    }
    validate_params(kind, &p).map_err(|e| invalid("params", e))?;
    Ok(p)
}

fn lambda_mode(ctx: &Ctx, search: LambdaSearch, big_n: usize, l: usize, trials: usize) -> LambdaMode {
    let exact = match search {
        LambdaSearch::Exact => true,
        LambdaSearch::Heuristic => false,
        LambdaSearch::Auto => {
            listop_core::combin::binomial_u128(big_n as u64, l as u64).saturating_mul(trials as u128) <= ctx.cap
        }
    };
    if exact {
        LambdaMode::Exact
    } else {
        LambdaMode::Heuristic(SearchOptions::default())
    }
}

fn mode_name(s: &EstimateSummary) -> &'static str {
    use listop_core::expectation::EstimateMode::*;
    match s.mode {
        FixedLambda => "fixed",
        MaxLambdaExact => "exact",
        MaxLambdaHeuristic => "heuristic",
        Reversed => "reversed",
    }
}

fn lambda_text(lambda: &[usize]) -> String {
    lambda.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

struct Extras {
    bound: Option<f64>,
    fitted_c: Option<f64>,
    delta0: Option<f64>,
    union_bound: Option<f64>,
    paper_bound: Option<f64>,
    reversed_mean: Option<f64>,
    ld: Option<(String, String)>,
}

#[allow(clippy::too_many_arguments)]
fn push_row(
    table: &mut Table,
    name: &str,
    kind: RowOpKind,
    c0: &CodeMatrix,
    p: &RowOpParams,
    l: usize,
    seed: u64,
    s: &EstimateSummary,
    distinct: usize,
    x: Extras,
) {
    let (ld_radius, ld_verdict) = match x.ld {
        Some((r, v)) => (Cell::from(r), Cell::from(v)),
        None => (Cell::Empty, Cell::Empty),
    };
    table.push(vec![
        name.into(),
        kind.name().into(),
        c0.n().into(),
        p.n.into(),
        c0.len().into(),
        l.into(),
        p.t.into(),
        s.trials.into(),
        seed.into(),
        s.mean.into(),
        s.std_dev.into(),
        x.bound.into(),
        x.fitted_c.into(),
        mode_name(s).into(),
        lambda_text(&s.lambda).into(),
        s.identity_checked.into(),
        x.delta0.into(),
        distinct.into(),
        x.union_bound.into(),
        x.paper_bound.into(),
        x.reversed_mean.into(),
        ld_radius,
        ld_verdict,
    ]);
}

pub(super) fn verdict_label(v: listop_core::Verdict) -> &'static str {
    match v {
        listop_core::Verdict::Holds => "holds",
        listop_core::Verdict::Violated => "violated",
        listop_core::Verdict::NoCounterexample => "no_counterexample",
    }
}


pub fn run_row_op(ctx: &Ctx, kind: RowOpKind) -> CliResult<Table> {
    let prm: RowOpLdParams = ctx.cfg.params()?;
    let eps = check_common(prm.eps, prm.trials, prm.repeats)?;
    let c0 = ctx.cfg.base_code(ctx.cap)?;
    let l = prm.l.unwrap_or(16.min(c0.len()));
    check_l(l, c0.len())?;
    let (t, n) = resolve_shape(&c0, kind, eps, prm.t, prm.n)?;
    let p = row_params(&c0, kind, t, n, None)?;
    let inj = injectivity_failure_bound(&c0, kind, &p, eps)?;
    let union_bound = big_to_f64(&inj.exact_union_bound);
    let mode = lambda_mode(ctx, prm.lambda_search, c0.len(), l, prm.trials);
    let name = kind_scenario(kind);

    let mut table = Table::new(COLUMNS);
    for i in 0..prm.repeats {
        let seed = ctx.row_seed(i);
        let s = estimate_e(&c0, kind, &p, l, prm.trials, seed, &mode, ctx.cap)?;
        let image = apply_row_op(&c0, &draw_row_operation(kind, &p, trial_seed(seed, 0))?)?;
        let ld = match prm.rho {
            Some(rho) => {
                let sm = ctx.search_mode(image.q(), image.n(), prm.center_samples, seed);
                let rep = is_list_decodable(&image, rho.0, l, sm, ctx.cap)?;
                Some((rho.0.to_string(), verdict_label(rep.verdict).to_string()))
            }
            None => None,
        };
        let bound = (kind == RowOpKind::Xor).then(|| xor_lemma_bound(n, l, eps));
        let x = Extras {
            bound,
            fitted_c: Some(s.mean / n as f64),
            delta0: delta0(&c0),
            union_bound: Some(union_bound),
            paper_bound: inj.paper_bound,
            reversed_mean: None,
            ld,
        };
        push_row(&mut table, name, kind, &c0, &p, l, seed, &s, image.distinct_count(), x);
    }
    Ok(table)
}

fn kind_scenario(kind: RowOpKind) -> &'static str {
    match kind {
        RowOpKind::Xor => "xor-ld",
        RowOpKind::Fold => "fold-ld",
        _ => "aggregate-ld",
    }
}

pub fn run_estimate(ctx: &Ctx) -> CliResult<Table> {
    let prm: EstimateParams = ctx.cfg.params()?;
    let eps = check_common(prm.eps, prm.trials, prm.repeats)?;
    let c0 = ctx.cfg.base_code(ctx.cap)?;
    let l = match (&prm.lambda, prm.l) {
        (Some(lam), Some(l)) if lam.len() != l => {
            return Err(invalid("params.L", format!("L = {l} differs from |lambda| = {}", lam.len())));
        }
        (Some(lam), _) => lam.len(),
        (None, Some(l)) => l,
        (None, None) => 4.min(c0.len()),
    };
    check_l(l, c0.len())?;
    if let Some(lam) = &prm.lambda {
        let mut sorted = lam.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != lam.len() || sorted.last().is_some_and(|&m| m >= c0.len()) {
            return Err(invalid("params.lambda", format!("must be distinct indices below N = {}", c0.len())));
        }
    }
    if !(prm.c_fit.is_finite() && prm.c_fit >= 0.0) {
        return Err(invalid("params.c_fit", "must be a non-negative number"));
    }
    let (t, n) = resolve_shape(&c0, prm.kind, eps, prm.t, prm.n)?;
    let p = row_params(&c0, prm.kind, t, n, prm.hash_q)?;
    let mode = lambda_mode(ctx, prm.lambda_search, c0.len(), l, prm.trials);
    let bound_params = |c_fit: f64| MainBoundParams {
        l,
        big_n: c0.len(),
        n,
        c_fit,
        alphabet_binary: c0.q() == 2,
    };

    let mut table = Table::new(COLUMNS);
    for i in 0..prm.repeats {
        let seed = ctx.row_seed(i);
        let s = match &prm.lambda {
            Some(lam) => estimate_e_fixed(&c0, prm.kind, &p, lam, prm.trials, seed)?,
            None => estimate_e(&c0, prm.kind, &p, l, prm.trials, seed, &mode, ctx.cap)?,
        };
        let image = apply_row_op(&c0, &draw_row_operation(prm.kind, &p, trial_seed(seed, 0))?)?;
        // the main bound is stated for 2 <= L <= N
        let bounded = l >= 2;
        let bound = if bounded { Some(main_bound(s.mean, &bound_params(prm.c_fit))?) } else { None };
        let (reversed_mean, fitted_c) = if prm.reversed {
            let r = estimate_reversed(&c0, prm.kind, &p, l, prm.trials, seed, ctx.cap)?;
            let fit = if bounded { Some(fit_main_constant(&[(s.mean, r.mean, bound_params(0.0))])?) } else { None };
            (Some(r.mean), fit)
        } else {
            (None, None)
        };
        let x = Extras { bound, fitted_c, delta0: delta0(&c0), union_bound: None, paper_bound: None, reversed_mean, ld: None };
        push_row(&mut table, "estimate-E", prm.kind, &c0, &p, l, seed, &s, image.distinct_count(), x);
    }
    Ok(table)
}
