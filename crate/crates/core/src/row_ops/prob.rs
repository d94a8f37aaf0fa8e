//! Exact per-row difference probabilities and what they imply for pairwise
//! distances and injectivity, next to the with-replacement approximations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{validate_params, RowOpKind, RowOpParams};
use crate::codes::{dist, CodeMatrix};
use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::ratio::big_to_f64;

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn check_range(n0: usize, w: usize, t: usize) -> Result<()> {
    if w > n0 || t == 0 || t > n0 {
        return Err(Error::input(format!("need 0 <= w <= n0 and 1 <= t <= n0, got n0 = {n0}, w = {w}, t = {t}")));
    }
    Ok(())
}

/// Probability that a sum of `j` independent uniform nonzero elements of
/// `F_q` is nonzero.
fn nonzero_sum_probability(q: u64, j: usize) -> BigRational {
    if j == 0 {
        return BigRational::zero();
    }
    let q = BigInt::from(q);
    let q1: BigInt = &q - 1u32;
    let sign = if j.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    rat(q1.clone(), q.clone()) - rat(sign, &q * q1.pow(j as u32 - 1))
}

/// Pr over a uniform support of size `t` and uniform nonzero coefficients in
/// `F_q` that the inner product with a fixed weight-`w` word is nonzero.
pub fn inner_product_difference_probability(q: u64, n0: usize, w: usize, t: usize) -> Result<BigRational> {
    check_range(n0, w, t)?;
    let total = BigInt::from(binomial(n0 as u64, t as u64));
    let mut acc = BigRational::zero();
    for j in 1..=t.min(w) {
        if t - j > n0 - w {
            continue;
        }
        let ways = BigInt::from(binomial(w as u64, j as u64) * binomial((n0 - w) as u64, (t - j) as u64));
        acc += rat(ways, total.clone()) * nonzero_sum_probability(q, j);
    }
    Ok(acc)
}

/// Pr that `<v, x>` is odd for a uniform weight-`t` binary `v` and a fixed `x`
/// of weight `w`: `sum_{j odd} C(w,j) C(n0-w,t-j) / C(n0,t)`.
pub fn xor_parity_probability(n0: usize, w: usize, t: usize) -> Result<BigRational> {
    inner_product_difference_probability(2, n0, w, t)
}

/// The with-replacement estimate `(1 - (1 - w/n0)^t) / 2`.
pub fn xor_parity_approx(n0: usize, w: usize, t: usize) -> f64 {
    0.5 * (1.0 - (1.0 - w as f64 / n0 as f64).powi(t as i32))
}

/// Pr that a uniform `t`-subset of `[0, n0)` misses a fixed `w`-set:
/// `C(n0-w, t) / C(n0, t)`.
pub fn aggregation_agreement_probability(n0: usize, w: usize, t: usize) -> Result<BigRational> {
    check_range(n0, w, t)?;
    Ok(rat(binomial((n0 - w) as u64, t as u64), binomial(n0 as u64, t as u64)))
}

/// The with-replacement estimate `(1 - w/n0)^t`.
pub fn aggregation_miss_approx(n0: usize, w: usize, t: usize) -> f64 {
    (1.0 - w as f64 / n0 as f64).powi(t as i32)
}

/// Pr that one output row separates two words at distance `w`, averaged over
/// rows. For hashing the average over coordinates is `(w/n0)(1 - 1/q)`.
pub fn row_difference_probability(kind: RowOpKind, params: &RowOpParams, w: usize) -> Result<BigRational> {
    let t = validate_params(kind, params)?;
    let n0 = params.n0;
    check_range(n0, w, t)?;
    Ok(match kind {
        RowOpKind::Sampling | RowOpKind::Puncturing => rat(w, n0),
        RowOpKind::Xor => inner_product_difference_probability(params.q, n0, w, t)?,
        RowOpKind::Aggregate | RowOpKind::Fold => BigRational::one() - aggregation_agreement_probability(n0, w, t)?,
        RowOpKind::HashReduce => rat(w, n0) * rat(params.q - 1, params.q),
    })
}

/// Expected relative distance of transformed pairs, over distinct-valued
/// column pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDistanceSummary {
    pub min: BigRational,
    pub mean: BigRational,
    pub max: BigRational,
    pub pairs: u64,
}

impl PairDistanceSummary {
    pub fn as_f64(&self) -> (f64, f64, f64) {
        (big_to_f64(&self.min), big_to_f64(&self.mean), big_to_f64(&self.max))
    }
}

/// Histogram of absolute distances over unordered column pairs.
fn distance_histogram(code: &CodeMatrix) -> BTreeMap<usize, u64> {
    let mut h = BTreeMap::new();
    for a in 0..code.len() {
        for b in a + 1..code.len() {
            *h.entry(dist(code.codeword(a), code.codeword(b))).or_insert(0) += 1;
        }
    }
    h
}

pub fn expected_pairwise_distance(c0: &CodeMatrix, kind: RowOpKind, params: &RowOpParams) -> Result<PairDistanceSummary> {
    if params.n0 != c0.n() {
        return Err(Error::input(format!("params have n0 = {}, code has n = {}", params.n0, c0.n())));
    }
    let hist: BTreeMap<usize, u64> = distance_histogram(c0).into_iter().filter(|(w, _)| *w > 0).collect();
    if hist.is_empty() {
        return Err(Error::Degenerate("fewer than two distinct codewords".into()));
    }
    let mut min: Option<BigRational> = None;
    let mut max: Option<BigRational> = None;
    let mut sum = BigRational::zero();
    let mut pairs = 0u64;
    for (&w, &count) in &hist {
        let p = row_difference_probability(kind, params, w)?;
        sum += &p * BigRational::from_integer(count.into());
        pairs += count;
        if min.as_ref().is_none_or(|m| p < *m) {
            min = Some(p.clone());
        }
        if max.as_ref().is_none_or(|m| p > *m) {
            max = Some(p);
        }
    }
    Ok(PairDistanceSummary {
        min: min.unwrap(),
        mean: sum / BigRational::from_integer(pairs.into()),
        max: max.unwrap(),
        pairs,
    })
}

/// Union bounds on `Pr[f(C0) has a repeated column]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectivityBound {
    /// `sum over pairs of Pr[the pair collides]`, computed exactly.
    pub exact_union_bound: BigRational,
    /// The closed form `N^2 eps^(2nt)` (aggregation, folding) or
    /// `N^2 ((1+eps^2)/2)^n` (xor); absent for the other kinds.
    pub paper_bound: Option<f64>,
}

/// Probability that one pair at distance `w` collides in every output row.
fn collision_probability(kind: RowOpKind, params: &RowOpParams, w: usize) -> Result<BigRational> {
    let (n0, n) = (params.n0, params.n);
    if w == 0 {
        return Ok(BigRational::one());
    }
    Ok(match kind {
        RowOpKind::Fold => BigRational::zero(),
        RowOpKind::Puncturing => rat(binomial((n0 - w) as u64, n as u64), binomial(n0 as u64, n as u64)),
        RowOpKind::HashReduce => rat(1, BigInt::from(params.q).pow(w as u32)),
        _ => (BigRational::one() - row_difference_probability(kind, params, w)?).pow(n as i32),
    })
}

/// `eps` is only used by the closed form.
pub fn injectivity_failure_bound(c0: &CodeMatrix, kind: RowOpKind, params: &RowOpParams, eps: f64) -> Result<InjectivityBound> {
    let t = validate_params(kind, params)?;
    if params.n0 != c0.n() {
        return Err(Error::input(format!("params have n0 = {}, code has n = {}", params.n0, c0.n())));
    }
    let mut exact = BigRational::zero();
    for (w, count) in distance_histogram(c0) {
        exact += collision_probability(kind, params, w)? * BigRational::from_integer(count.into());
    }
    let big_n = c0.len() as f64;
    let n = params.n as i32;
    let paper_bound = match kind {
        RowOpKind::Aggregate | RowOpKind::Fold => Some(big_n * big_n * eps.powi(2 * n * t as i32)),
        RowOpKind::Xor => Some(big_n * big_n * ((1.0 + eps * eps) / 2.0).powi(n)),
        _ => None,
    };
    Ok(InjectivityBound { exact_union_bound: exact, paper_bound })
}
