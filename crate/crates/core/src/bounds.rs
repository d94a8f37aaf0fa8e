//! Closed-form bounds: q-ary entropy, list-decoding capacity, average-radius
//! Johnson bounds, a Chernoff tail bound, the radius-transfer list-size bound
//! and the max-to-average parameter map. All in double precision; evaluation
//! outside a formula's domain is an error.

use crate::error::{Error, Result};
use crate::ratio::Ratio64;

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::domain(format!("alphabet size {q} < 2")));
    }
    Ok(())
}

/// `H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`, with `0 log 0 = 0`.
pub fn entropy_q(q: u64, x: f64) -> Result<f64> {
    check_q(q)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("entropy argument {x} outside [0, 1]")));
    }
    let lq = (q as f64).ln();
    let xlx = |v: f64| if v == 0.0 { 0.0 } else { v * v.ln() };
    Ok((x * ((q - 1) as f64).ln() - xlx(x) - xlx(1.0 - x)) / lq)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity {
    /// `1 - H_q(1 - 1/q - eps)`.
    pub exact: f64,
    /// `min(eps, q eps^2 / (2 ln q))`.
    pub expansion: f64,
}

pub fn capacity_rate(q: u64, eps: f64) -> Result<Capacity> {
    check_q(q)?;
    let top = 1.0 - 1.0 / q as f64;
    if !(eps > 0.0 && eps <= top) {
        return Err(Error::domain(format!("eps = {eps} outside (0, {top}]")));
    }
    let rho = (top - eps).max(0.0);
    let exact = 1.0 - entropy_q(q, rho)?;
    let expansion = eps.min(q as f64 * eps * eps / (2.0 * (q as f64).ln()));
    Ok(Capacity { exact, expansion })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JohnsonVariant {
    Binary,
    /// The `eps`-parametrized q-ary form, `0 < eps < 1`.
    QEps(f64),
    QSqrt,
}

/// Right-hand side of the average-radius Johnson bound: an upper bound on
/// `max_z sum_{c in Lambda} agr(c, z)` for `|Lambda| = L` given
/// `sum_pairwise`, the sum of relative distances over ordered distinct pairs.
pub fn johnson_rhs(variant: JohnsonVariant, n: usize, l: usize, q: u64, sum_pairwise: f64) -> Result<f64> {
    check_q(q)?;
    if l == 0 {
        return Err(Error::domain("list size must be at least 1"));
    }
    let (n, lf, qf) = (n as f64, l as f64, q as f64);
    let max_sum = lf * (lf - 1.0);
    if !(sum_pairwise >= 0.0 && sum_pairwise <= max_sum + 1e-9) {
        return Err(Error::domain(format!("pairwise distance sum {sum_pairwise} outside [0, {max_sum}]")));
    }
    match variant {
        JohnsonVariant::Binary => {
            if q != 2 {
                return Err(Error::domain("binary Johnson bound applied to a non-binary code"));
            }
            let rad = lf * lf - 2.0 * sum_pairwise;
            if rad < 0.0 {
                return Err(Error::domain(format!("negative radicand {rad}")));
            }
            Ok(n / 2.0 * (lf + rad.sqrt()))
        }
        JohnsonVariant::QEps(eps) => {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::domain(format!("eps = {eps} outside (0, 1)")));
            }
            Ok(n * lf / qf + n * lf / (2.0 * eps) * (1.0 + eps * eps) * (1.0 - 1.0 / qf)
                - n / (2.0 * lf * eps) * sum_pairwise)
        }
        JohnsonVariant::QSqrt => {
            let rad = n * n + 4.0 * n * n * lf * (lf - 1.0) - 4.0 * n * n * sum_pairwise;
            if rad < 0.0 {
                return Err(Error::domain(format!("negative radicand {rad}")));
            }
            Ok(0.5 * (n + rad.sqrt()))
        }
    }
}

/// `(pm / t)^(t - pm)`, stated as a bound on `Pr[sum of m Bernoulli(p) > t]`.
///
/// The closed form is evaluated as given. It is not a valid tail bound for
/// every `(p, m, t)`: it can undershoot the true tail for fractional `t`, and
/// for integer `t` once `p` is small and `m` exceeds about 20.
pub fn chernoff_bound(p: f64, m: u64, t: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("bias {p} outside (0, 1)")));
    }
    let pm = p * m as f64;
    if !(t > pm) {
        return Err(Error::domain(format!("threshold {t} must exceed pm = {pm}")));
    }
    Ok((pm / t).powf(t - pm))
}

/// Exact `Pr[Bin(m, p) > t]`.
pub fn binomial_tail_above(p: f64, m: u64, t: f64) -> f64 {
    let mut acc = 0.0;
    let mut term = (1.0 - p).powi(m as i32); // k = 0
    for k in 0..=m {
        if k > 0 {
            term *= (m - k + 1) as f64 / k as f64 * p / (1.0 - p);
        }
        if k as f64 > t {
            acc += term;
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferBound {
    /// `L q^(n (H_q(rho') - H_q(rho))) 2^n`.
    pub value: f64,
    /// The `o(1)` correction in the exponent is not included.
    pub asymptotic_term_dropped: bool,
}

/// List-size bound at radius `rho2` for a code that is `(rho, L)`-list decodable.
pub fn eb_transfer_bound(l: usize, q: u64, n: usize, rho: f64, rho2: f64) -> Result<TransferBound> {
    check_q(q)?;
    let top = 1.0 - 1.0 / q as f64;
    if !(0.0 <= rho && rho <= rho2 && rho2 < top) {
        return Err(Error::domain(format!("need 0 <= rho = {rho} <= rho' = {rho2} < {top}")));
    }
    let expo = n as f64 * (entropy_q(q, rho2)? - entropy_q(q, rho)?);
    Ok(TransferBound {
        value: l as f64 * (q as f64).powf(expo) * 2f64.powi(n as i32),
        asymptotic_term_dropped: true,
    })
}

/// `(rho - gamma, ceil(L / gamma))`: the average-radius parameters implied by
/// `(rho, L)`-list decodability.
pub fn max_to_avg_params(rho: Ratio64, l: usize, gamma: Ratio64) -> Result<(Ratio64, usize)> {
    if *gamma.numer() == 0 || gamma >= rho {
        return Err(Error::domain(format!("need 0 < gamma = {gamma} < rho = {rho}")));
    }
    let lp = (l as u128 * *gamma.denom() as u128).div_ceil(*gamma.numer() as u128);
    Ok((rho - gamma, lp as usize))
}
