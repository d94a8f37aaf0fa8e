//! Monte-Carlo and exact estimators of the expected worst-case agreement
//! after a random row operation:
//!
//! `E = max_{|Lambda| = L} E_f max_z sum_{c in Lambda} agr(f(c), z)`,
//!
//! its reversed form `E_f max_{Lambda} max_z ...`, replacement-dominance
//! comparisons, and the bound template with a fitted constant.
//!
//! The inner `max_z` is always the plurality sum. Trial `i` draws its
//! operation from `derive_seed(seed, "trial", i)`, so every estimator reuses
//! the same operations for the same `(seed, i)`.

pub mod stats;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{max_agreement_sum_exhaustive, plurality_sum_unchecked, search_lambda, CodeMatrix, SearchOptions};
use crate::combin::{argmax_subset, binomial_u128, pow_u128};
use crate::error::{Error, Result};
use crate::row_ops::{apply_row_op, apply_to_columns, draw_row_operation, enumerate_tuples, RowOpKind, RowOpParams, RowOpTuple};
use crate::seed::derive_seed;

pub use stats::{mean_std, KahanSum};

/// Centers enumerated when cross-checking the plurality identity.
const SPOT_CHECK_CAP: u128 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMode {
    FixedLambda,
    MaxLambdaExact,
    MaxLambdaHeuristic,
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub trials: usize,
    pub seed: u64,
    pub mode: EstimateMode,
    /// The set the estimate refers to; empty for the reversed estimate.
    pub lambda: Vec<usize>,
    /// Whether trial 0 was cross-checked against full center enumeration.
    pub identity_checked: bool,
}

impl EstimateSummary {
    pub fn std_err(&self) -> f64 {
        self.std_dev / (self.trials as f64).sqrt()
    }

    fn from_values(values: &[f64], seed: u64, mode: EstimateMode, lambda: Vec<usize>, identity_checked: bool) -> Self {
        let (mean, std_dev) = mean_std(values);
        EstimateSummary { mean, std_dev, trials: values.len(), seed, mode, lambda, identity_checked }
    }
}

#[derive(Debug, Clone)]
pub enum LambdaMode {
    /// Enumerate every `L`-subset.
    Exact,
    /// Greedy plus swap search; a lower estimate of the outer max.
    Heuristic(SearchOptions),
}

pub fn trial_seed(seed: u64, i: usize) -> u64 {
    derive_seed(seed, "trial", i as u64)
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::input("trials must be at least 1"));
    }
    Ok(())
}

fn draw(kind: RowOpKind, params: &RowOpParams, seed: u64, i: usize) -> Result<RowOpTuple> {
    draw_row_operation(kind, params, trial_seed(seed, i))
}

/// Images of the whole code, one per trial, in trial order.
fn images(c0: &CodeMatrix, kind: RowOpKind, params: &RowOpParams, trials: usize, seed: u64) -> Result<Vec<CodeMatrix>> {
    (0..trials)
        .into_par_iter()
        .map(|i| apply_row_op(c0, &draw(kind, params, seed, i)?))
        .collect()
}

/// Asserts the plurality identity on one image when enumeration is cheap.
fn spot_check(image: &CodeMatrix, lambda: &[usize], plurality: usize) -> Result<bool> {
    if pow_u128(image.q(), image.n() as u64) > SPOT_CHECK_CAP {
        return Ok(false);
    }
    let brute = max_agreement_sum_exhaustive(image, lambda, SPOT_CHECK_CAP)?;
    assert_eq!(brute, plurality, "plurality identity violated on {lambda:?}");
    Ok(true)
}

/// Monte-Carlo mean over `f` of `max_z sum_{c in lambda} agr(f(c), z)`.
pub fn estimate_e_fixed(
    c0: &CodeMatrix,
    kind: RowOpKind,
    params: &RowOpParams,
    lambda: &[usize],
    trials: usize,
    seed: u64,
) -> Result<EstimateSummary> {
    check_trials(trials)?;
    crate::codes::check_lambda(c0, lambda)?;
    let all: Vec<usize> = (0..lambda.len()).collect();
    let per_trial: Vec<(usize, Option<CodeMatrix>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let image = apply_to_columns(c0, &draw(kind, params, seed, i)?, lambda)?;
            let v = plurality_sum_unchecked(&image, &all, &mut Vec::new());
            Ok((v, (i == 0).then_some(image)))
        })
        .collect::<Result<_>>()?;
    let checked = match &per_trial[0].1 {
        Some(img) => spot_check(img, &all, per_trial[0].0)?,
        None => false,
    };
    let values: Vec<f64> = per_trial.iter().map(|(v, _)| *v as f64).collect();
    Ok(EstimateSummary::from_values(&values, seed, EstimateMode::FixedLambda, lambda.to_vec(), checked))
}

/// Estimate of `E`: the outer max over `Lambda` of the per-set means, all sets
/// sharing the same `trials` draws. The reported mean is the in-sample mean
/// of the winning set.
#[allow(clippy::too_many_arguments)]
pub fn estimate_e(
    c0: &CodeMatrix,
    kind: RowOpKind,
    params: &RowOpParams,
    l: usize,
    trials: usize,
    seed: u64,
    lambda_mode: &LambdaMode,
    cap: u128,
) -> Result<EstimateSummary> {
    check_trials(trials)?;
    let big_n0 = c0.len();
    if l == 0 || l > big_n0 {
        return Err(Error::input(format!("list size L = {l} must lie in [1, N0 = {big_n0}]")));
    }
    let (lambda, mode) = match lambda_mode {
        LambdaMode::Exact => {
            let needed = binomial_u128(big_n0 as u64, l as u64);
            if needed > cap {
                return Err(Error::Budget { what: "subset enumeration", needed, cap });
            }
            let imgs = images(c0, kind, params, trials, seed)?;
            let (_, lam) = argmax_subset(big_n0, l, |lam, buf| {
                imgs.iter().map(|img| plurality_sum_unchecked(img, lam, buf) as u64).sum()
            });
            (lam, EstimateMode::MaxLambdaExact)
        }
        LambdaMode::Heuristic(opts) => {
            let imgs = images(c0, kind, params, trials, seed)?;
            let opts = SearchOptions { seed: derive_seed(seed, "lambda", 0), ..opts.clone() };
            let (lam, _) = search_lambda(&imgs, l, &[], &opts);
            (lam, EstimateMode::MaxLambdaHeuristic)
        }
    };
    let mut s = estimate_e_fixed(c0, kind, params, &lambda, trials, seed)?;
    s.mode = mode;
    Ok(s)
}

/// Monte-Carlo mean over `f` of `max_{|Lambda| = L} max_z sum agr(f(c), z)`,
/// with the inner max over sets taken exactly.
pub fn estimate_reversed(
    c0: &CodeMatrix,
    kind: RowOpKind,
    params: &RowOpParams,
    l: usize,
    trials: usize,
    seed: u64,
    cap: u128,
) -> Result<EstimateSummary> {
    let values = reversed_values(c0, kind, params, l, trials, seed, cap)?;
    let values: Vec<f64> = values.into_iter().map(|v| v as f64).collect();
    Ok(EstimateSummary::from_values(&values, seed, EstimateMode::Reversed, Vec::new(), false))
}

fn reversed_values(
    c0: &CodeMatrix,
    kind: RowOpKind,
    params: &RowOpParams,
    l: usize,
    trials: usize,
    seed: u64,
    cap: u128,
) -> Result<Vec<u64>> {
    check_trials(trials)?;
    let big_n0 = c0.len();
    if l == 0 || l > big_n0 {
        return Err(Error::input(format!("list size L = {l} must lie in [1, N0 = {big_n0}]")));
    }
    let needed = binomial_u128(big_n0 as u64, l as u64);
    if needed > cap {
        return Err(Error::Budget { what: "subset enumeration", needed, cap });
    }
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let img = apply_row_op(c0, &draw(kind, params, seed, i)?)?;
            Ok(argmax_subset(big_n0, l, |lam, buf| plurality_sum_unchecked(&img, lam, buf) as u64).0)
        })
        .collect()
}

fn exact_mean<F>(tuples: &[RowOpTuple], mut value: F) -> Result<BigRational>
where
    F: FnMut(&RowOpTuple) -> Result<u64>,
{
    let mut total = BigInt::zero();
    for f in tuples {
        total += value(f)?;
    }
    Ok(BigRational::new(total, BigInt::from(tuples.len())))
}

/// `E_f max_z sum_{c in lambda} agr(f(c), z)` by enumerating every tuple.
pub fn exact_e_fixed(c0: &CodeMatrix, kind: RowOpKind, params: &RowOpParams, lambda: &[usize], cap: u128) -> Result<BigRational> {
    crate::codes::check_lambda(c0, lambda)?;
    let tuples = enumerate_tuples(kind, params, cap)?;
    let all: Vec<usize> = (0..lambda.len()).collect();
    exact_mean(&tuples, |f| Ok(plurality_sum_unchecked(&apply_to_columns(c0, f, lambda)?, &all, &mut Vec::new()) as u64))
}

/// `E` by enumerating every tuple and every set.
pub fn exact_e(c0: &CodeMatrix, kind: RowOpKind, params: &RowOpParams, l: usize, cap: u128) -> Result<(BigRational, Vec<usize>)> {
    let mut best: Option<(BigRational, Vec<usize>)> = None;
    let mut err = None;
    crate::combin::for_each_subset(c0.len(), l, |lam| {
        if err.is_some() {
            return;
        }
        match exact_e_fixed(c0, kind, params, lam, cap) {
            Ok(v) => {
                if best.as_ref().is_none_or(|b| v > b.0) {
                    best = Some((v, lam.to_vec()));
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    best.ok_or_else(|| Error::input(format!("no subsets of size {l}")))
}

/// `E_f max_{Lambda} max_z ...` by enumerating every tuple and every set.
pub fn exact_reversed(c0: &CodeMatrix, kind: RowOpKind, params: &RowOpParams, l: usize, cap: u128) -> Result<BigRational> {
    if l == 0 || l > c0.len() {
        return Err(Error::input(format!("list size L = {l} out of range")));
    }
    let tuples = enumerate_tuples(kind, params, cap)?;
    exact_mean(&tuples, |f| {
        let img = apply_row_op(c0, f)?;
        Ok(argmax_subset(c0.len(), l, |lam, buf| plurality_sum_unchecked(&img, lam, buf) as u64).0)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainBoundParams {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub n: usize,
    pub c_fit: f64,
    pub alphabet_binary: bool,
}

impl MainBoundParams {
    fn check(&self) -> Result<()> {
        if self.l < 2 || self.big_n < self.l {
            return Err(Error::input(format!("need 2 <= L <= N, got L = {}, N = {}", self.l, self.big_n)));
        }
        Ok(())
    }

    /// `L ln(N) ln^5(L)` for the general template, `L sqrt(n ln N)` for binary.
    fn scale(&self) -> f64 {
        let (l, big_n) = (self.l as f64, self.big_n as f64);
        if self.alphabet_binary {
            l * (self.n as f64 * big_n.ln()).sqrt()
        } else {
            l * big_n.ln() * l.ln().powi(5)
        }
    }
}

/// `E + Y + sqrt(E Y)` with `Y = C L ln(N) ln^5(L)`, or `E + C L sqrt(n ln N)`
/// for binary alphabets. Natural logarithms throughout.
pub fn main_bound(e: f64, params: &MainBoundParams) -> Result<f64> {
    params.check()?;
    if !(e >= 0.0) {
        return Err(Error::input(format!("E = {e} must be non-negative")));
    }
    let y = params.c_fit * params.scale();
    Ok(if params.alphabet_binary { e + y } else { e + y + (e * y).sqrt() })
}

/// Smallest `C >= 0` with `reversed <= main_bound(e)` for every scenario
/// `(e, reversed, params)`; `params.c_fit` is ignored.
pub fn fit_main_constant(scenarios: &[(f64, f64, MainBoundParams)]) -> Result<f64> {
    let mut c: f64 = 0.0;
    for (e, r, p) in scenarios {
        p.check()?;
        let gap = r - e;
        if gap <= 0.0 {
            continue;
        }
        let need = if p.alphabet_binary {
            gap / p.scale()
        } else {
            // s = sqrt(Y) solves s^2 + sqrt(E) s - gap = 0
            let s = (-(e.sqrt()) + (e + 4.0 * gap).sqrt()) / 2.0;
            s * s / p.scale()
        };
        c = c.max(need);
    }
    Ok(c)
}

/// `(n/2)(L(1 + eps) + sqrt(L))`, the expectation bound for random XOR.
pub fn xor_lemma_bound(n: usize, l: usize, eps: f64) -> f64 {
    n as f64 / 2.0 * (l as f64 * (1.0 + eps) + (l as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominancePair {
    SamplingVsPuncturing,
    AggregateVsFold,
}

impl DominancePair {
    /// (with replacement, without replacement)
    pub fn kinds(self) -> (RowOpKind, RowOpKind) {
        match self {
            DominancePair::SamplingVsPuncturing => (RowOpKind::Sampling, RowOpKind::Puncturing),
            DominancePair::AggregateVsFold => (RowOpKind::Aggregate, RowOpKind::Fold),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceResult {
    pub mean_with: f64,
    pub mean_without: f64,
    /// `mean_without - mean_with`.
    pub delta: f64,
    /// Standard error of the paired differences.
    pub paired_std_err: f64,
    pub z_score: f64,
    pub trials: usize,
}

impl DominanceResult {
    /// `mean_without <= mean_with + k * paired_std_err`.
    pub fn dominated_within(&self, k: f64) -> bool {
        self.mean_without <= self.mean_with + k * self.paired_std_err
    }
}

/// Paired estimates of `E_f max_{Lambda, z} sum agr` under the with- and
/// without-replacement samplers; trial `i` feeds the same seed to both.
#[allow(clippy::too_many_arguments)]
pub fn replacement_dominance_test(
    c0: &CodeMatrix,
    pair: DominancePair,
    params: &RowOpParams,
    l: usize,
    trials: usize,
    seed: u64,
    cap: u128,
) -> Result<DominanceResult> {
    let (with, without) = pair.kinds();
    let a = reversed_values(c0, with, params, l, trials, seed, cap)?;
    let b = reversed_values(c0, without, params, l, trials, seed, cap)?;
    let fa: Vec<f64> = a.iter().map(|&v| v as f64).collect();
    let fb: Vec<f64> = b.iter().map(|&v| v as f64).collect();
    let diffs: Vec<f64> = b.iter().zip(&a).map(|(&x, &y)| x as f64 - y as f64).collect();
    let (mean_with, _) = mean_std(&fa);
    let (mean_without, _) = mean_std(&fb);
    let (delta, sd) = mean_std(&diffs);
    let se = sd / (trials as f64).sqrt();
    let z_score = if se > 0.0 {
        delta / se
    } else if delta == 0.0 {
        0.0
    } else {
        delta.signum() * f64::INFINITY
    };
    Ok(DominanceResult { mean_with, mean_without, delta, paired_std_err: se, z_score, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{max_agreement_sum, DEFAULT_CAP};
    use crate::constructions::random_code;
    use crate::ratio::big_to_f64;

    fn small() -> CodeMatrix {
        CodeMatrix::from_codewords(2, [[0u64, 1, 1], [1, 1, 0], [0, 0, 1], [1, 0, 1]]).unwrap()
    }

    #[test]
    fn singleton_lambda_gives_n() {
        let s = estimate_e_fixed(&small(), RowOpKind::Sampling, &RowOpParams::new(3, 5, 1), &[2], 20, 1).unwrap();
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.std_dev, 0.0);
        assert!(s.identity_checked);
    }

    #[test]
    fn permutation_preserves_pluralities() {
        let c = small();
        let lam = [0, 1, 3];
        let s = estimate_e_fixed(&c, RowOpKind::Puncturing, &RowOpParams::new(3, 3, 1), &lam, 30, 2).unwrap();
        assert_eq!(s.mean, max_agreement_sum(&c, &lam).unwrap() as f64);
    }

    #[test]
    fn sampling_oracle_has_nine_tuples() {
        let c = small();
        let p = RowOpParams::new(3, 2, 1);
        let exact = exact_e_fixed(&c, RowOpKind::Sampling, &p, &[0, 1], DEFAULT_CAP).unwrap();
        // rows of {011, 110}: pluralities 1, 2, 1; average over 9 ordered pairs is 2 * 4/3
        assert_eq!(exact, BigRational::new(8.into(), 3.into()));
        let mc = estimate_e_fixed(&c, RowOpKind::Sampling, &p, &[0, 1], 20_000, 5).unwrap();
        assert!((mc.mean - 8.0 / 3.0).abs() < 4.0 * mc.std_err());
    }

    #[test]
    fn full_lambda_matches_fixed() {
        let c = small();
        let p = RowOpParams::new(3, 4, 2);
        let a = estimate_e(&c, RowOpKind::Aggregate, &p, 4, 50, 9, &LambdaMode::Exact, DEFAULT_CAP).unwrap();
        let b = estimate_e_fixed(&c, RowOpKind::Aggregate, &p, &[0, 1, 2, 3], 50, 9).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.mode, EstimateMode::MaxLambdaExact);
    }

    #[test]
    fn duplicate_pair_is_worst() {
        let c = CodeMatrix::from_codewords(2, [[0u64, 1, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [1, 1, 1, 1]]).unwrap();
        // odd t so the complementary pair never collides
        let p = RowOpParams::new(4, 6, 3);
        let s = estimate_e(&c, RowOpKind::Xor, &p, 2, 40, 3, &LambdaMode::Exact, DEFAULT_CAP).unwrap();
        assert_eq!(s.lambda, vec![0, 2]);
        assert_eq!(s.mean, 12.0);
        let h = estimate_e(&c, RowOpKind::Xor, &p, 2, 40, 3, &LambdaMode::Heuristic(SearchOptions::default()), DEFAULT_CAP).unwrap();
        assert_eq!(h.mean, 12.0);
    }

    #[test]
    fn reversed_dominates_and_l1() {
        let c = random_code(3, 4, 5, 8).unwrap();
        let p = RowOpParams::new(4, 3, 2).with_field(3);
        let r1 = estimate_reversed(&c, RowOpKind::Aggregate, &p, 1, 10, 4, DEFAULT_CAP).unwrap();
        assert_eq!(r1.mean, 3.0);
        let e = estimate_e(&c, RowOpKind::Aggregate, &p, 2, 60, 4, &LambdaMode::Exact, DEFAULT_CAP).unwrap();
        let r = estimate_reversed(&c, RowOpKind::Aggregate, &p, 2, 60, 4, DEFAULT_CAP).unwrap();
        assert!(r.mean >= e.mean);
        let exact_r = big_to_f64(&exact_reversed(&c, RowOpKind::Sampling, &RowOpParams::new(4, 2, 1), 2, DEFAULT_CAP).unwrap());
        let exact_e = big_to_f64(&exact_e(&c, RowOpKind::Sampling, &RowOpParams::new(4, 2, 1), 2, DEFAULT_CAP).unwrap().0);
        assert!(exact_r >= exact_e);
    }

    #[test]
    fn bound_template() {
        let p = MainBoundParams { l: 4, big_n: 100, n: 10, c_fit: 0.0, alphabet_binary: false };
        assert_eq!(main_bound(7.5, &p).unwrap(), 7.5);
        let p1 = MainBoundParams { c_fit: 1.0, ..p };
        let y = 4.0 * 100f64.ln() * 4f64.ln().powi(5);
        assert!((main_bound(0.0, &p1).unwrap() - y).abs() < 1e-9);
        for binary in [false, true] {
            let p = MainBoundParams { alphabet_binary: binary, ..p };
            let c = fit_main_constant(&[(10.0, 25.0, p), (12.0, 14.0, p)]).unwrap();
            let fitted = MainBoundParams { c_fit: c, ..p };
            assert!((main_bound(10.0, &fitted).unwrap() - 25.0).abs() < 1e-9);
            assert!(main_bound(12.0, &fitted).unwrap() >= 14.0);
        }
        assert!(main_bound(1.0, &MainBoundParams { l: 1, ..p }).is_err());
    }

    #[test]
    fn dominance_replays_and_n1_coincides() {
        let c = random_code(2, 5, 6, 1).unwrap();
        let p = RowOpParams::new(5, 1, 1);
        let d = replacement_dominance_test(&c, DominancePair::SamplingVsPuncturing, &p, 2, 50, 7, DEFAULT_CAP).unwrap();
        assert_eq!(d.delta, 0.0);
        let p = RowOpParams::new(5, 4, 1);
        let a = replacement_dominance_test(&c, DominancePair::SamplingVsPuncturing, &p, 2, 50, 7, DEFAULT_CAP).unwrap();
        let b = replacement_dominance_test(&c, DominancePair::SamplingVsPuncturing, &p, 2, 50, 7, DEFAULT_CAP).unwrap();
        assert_eq!(a, b);
    }
}
