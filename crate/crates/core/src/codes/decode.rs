//! Exact and sampled checks of list decodability and average-radius list
//! decodability.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::CodeMatrix;
use super::metric::{check_lambda, dist, plurality_sum_unchecked};
use super::search::{search_lambda, SearchOptions};
use crate::combin::{argmax_subset, binomial_u128, pow_u128};
use crate::error::{Error, Result};
use crate::field::digits;
use crate::ratio::{abs_radius, radius_is_integral, Ratio64};
use crate::seed;

pub const DEFAULT_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Full enumeration; proves or refutes.
    Exhaustive,
    /// Randomized search; can only refute.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Proven by exhaustive enumeration.
    Holds,
    /// A witness violating the property was found.
    Violated,
    /// Sampled search used its budget without finding a violation.
    NoCounterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdReport {
    pub verdict: Verdict,
    pub mode: ReportMode,
    pub radius: Ratio64,
    /// `floor(radius * n)`.
    pub abs_radius: usize,
    /// False when `radius * n` was not an integer and got floored.
    pub radius_integral: bool,
    pub list_bound: usize,
    /// Worst center seen. Always present when the verdict is `Violated`.
    pub witness_center: Option<Vec<u64>>,
    /// Standard mode: codewords in the worst ball. Average mode: the worst set.
    pub witness_list: Vec<usize>,
    /// Standard mode: ball size at the witness. Average mode: the set size.
    pub witness_list_size: usize,
    /// Average mode only: `sum_{c in set} agr(c, z)` at the witness.
    pub witness_agreement: Option<usize>,
    pub evaluations: u128,
}

impl LdReport {
    /// True only for a proof.
    pub fn decodable(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

fn check_radius(rho: Ratio64) -> Result<()> {
    if rho > Ratio64::from_integer(1) {
        return Err(Error::input(format!("relative radius {rho} exceeds 1")));
    }
    Ok(())
}

/// Ball size and members around `z`.
fn ball(code: &CodeMatrix, z: &[u64], r: usize) -> (usize, Vec<usize>) {
    let members: Vec<usize> = code
        .codewords()
        .enumerate()
        .filter(|(_, c)| dist(c, z) <= r)
        .map(|(i, _)| i)
        .collect();
    (members.len(), members)
}

/// `(rho, L)`-list decodability: every ball of radius `floor(rho n)` holds fewer than `L` codewords.
pub fn is_list_decodable(code: &CodeMatrix, rho: Ratio64, list_bound: usize, mode: SearchMode, cap: u128) -> Result<LdReport> {
    check_radius(rho)?;
    if list_bound == 0 {
        return Err(Error::input("list bound must be at least 1"));
    }
    let n = code.n();
    let r = abs_radius(rho, n);
    let mut report = LdReport {
        verdict: Verdict::Holds,
        mode: match mode {
            SearchMode::Exhaustive => ReportMode::Exhaustive,
            SearchMode::Sampled { .. } => ReportMode::Sampled,
        },
        radius: rho,
        abs_radius: r,
        radius_integral: radius_is_integral(rho, n),
        list_bound,
        witness_center: None,
        witness_list: Vec::new(),
        witness_list_size: 0,
        witness_agreement: None,
        evaluations: 0,
    };
    if code.len() < list_bound {
        // no ball can hold L codewords
        return Ok(report);
    }

    match mode {
        SearchMode::Exhaustive => {
            let q = code.q();
            let total = pow_u128(q, n as u64);
            if total > cap {
                return Err(Error::Budget { what: "center enumeration", needed: total, cap });
            }
            let total = total as u64;
            const CHUNK: u64 = 1 << 12;
            let chunks = total.div_ceil(CHUNK);
            // (count, -index) max; ties resolved to the smallest center index
            let (count, idx) = (0..chunks)
                .into_par_iter()
                .map(|ch| {
                    let start = ch * CHUNK;
                    let end = (start + CHUNK).min(total);
                    let mut z = digits(start, q, n);
                    let mut best = (0usize, start);
                    for i in start..end {
                        let c = code.codewords().filter(|c| dist(c, &z) <= r).count();
                        if c > best.0 {
                            best = (c, i);
                        }
                        crate::combin::next_word(&mut z, q);
                    }
                    best
                })
                .reduce(|| (0, u64::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
            let z = digits(idx, q, n);
            let (_, members) = ball(code, &z, r);
            report.evaluations = total as u128;
            report.witness_list_size = count;
            report.witness_list = members;
            report.witness_center = Some(z);
            if count >= list_bound {
                report.verdict = Verdict::Violated;
            }
        }
        SearchMode::Sampled { samples, seed } => {
            let mut rng = seed::rng(seed);
            let q = code.q();
            let mut best: Option<(usize, Vec<u64>)> = None;
            for s in 0..samples {
                let z: Vec<u64> = if s % 2 == 0 {
                    (0..n).map(|_| rng.random_range(0..q)).collect()
                } else {
                    let mut z = code.codeword(rng.random_range(0..code.len())).to_vec();
                    let flips = rng.random_range(0..=r);
                    for _ in 0..flips {
                        let pos = rng.random_range(0..n);
                        z[pos] = rng.random_range(0..q);
                    }
                    z
                };
                let count = code.codewords().filter(|c| dist(c, &z) <= r).count();
                report.evaluations += 1;
                if best.as_ref().is_none_or(|(b, _)| count > *b) {
                    best = Some((count, z));
                    if count >= list_bound {
                        break;
                    }
                }
            }
            if let Some((count, z)) = best {
                let (_, members) = ball(code, &z, r);
                report.witness_list_size = count;
                report.witness_list = members;
                report.witness_center = Some(z);
                report.verdict = if count >= list_bound { Verdict::Violated } else { Verdict::NoCounterexample };
            } else {
                report.verdict = Verdict::NoCounterexample;
            }
        }
    }
    Ok(report)
}

/// Center attaining `max_z sum_{c in lambda} agr(c, z)`: the plurality symbol of each row
/// (smallest symbol on ties).
pub fn plurality_center(code: &CodeMatrix, lambda: &[usize]) -> Result<Vec<u64>> {
    check_lambda(code, lambda)?;
    let mut buf = Vec::with_capacity(lambda.len());
    Ok((0..code.n())
        .map(|row| {
            buf.clear();
            buf.extend(lambda.iter().map(|&c| code.symbol(row, c)));
            buf.sort_unstable();
            let (mut best_sym, mut best, mut run) = (buf[0], 1, 1);
            for i in 1..buf.len() {
                run = if buf[i] == buf[i - 1] { run + 1 } else { 1 };
                if run > best {
                    best = run;
                    best_sym = buf[i];
                }
            }
            best_sym
        })
        .collect())
}

/// Whether `sum > (1 - rho) n L`, exactly.
fn exceeds(sum: usize, rho: Ratio64, n: usize, l: usize) -> bool {
    let num = *rho.numer() as u128;
    let den = *rho.denom() as u128;
    sum as u128 * den > (den - num) * n as u128 * l as u128
}

/// `(rho, L)`-average-radius list decodability: every set of `L` codewords has
/// `max_z sum agr(c, z) <= (1 - rho) n L`. When `L > N` there is no such set
/// and the property holds vacuously.
pub fn is_avg_radius_list_decodable(code: &CodeMatrix, rho: Ratio64, list_bound: usize, mode: SearchMode, cap: u128) -> Result<LdReport> {
    check_radius(rho)?;
    if list_bound == 0 {
        return Err(Error::input("list bound must be at least 1"));
    }
    let n = code.n();
    let big_n = code.len();
    let mut report = LdReport {
        verdict: Verdict::Holds,
        mode: match mode {
            SearchMode::Exhaustive => ReportMode::Exhaustive,
            SearchMode::Sampled { .. } => ReportMode::Sampled,
        },
        radius: rho,
        abs_radius: abs_radius(rho, n),
        radius_integral: radius_is_integral(rho, n),
        list_bound,
        witness_center: None,
        witness_list: Vec::new(),
        witness_list_size: 0,
        witness_agreement: None,
        evaluations: 0,
    };
    if list_bound > big_n {
        return Ok(report);
    }

    let (set, sum) = match mode {
        SearchMode::Exhaustive => {
            let needed = binomial_u128(big_n as u64, list_bound as u64);
            if needed > cap {
                return Err(Error::Budget { what: "subset enumeration", needed, cap });
            }
            report.evaluations = needed;
            let (sum, set) = argmax_subset(big_n, list_bound, |lam, buf| plurality_sum_unchecked(code, lam, buf) as u64);
            (set, sum as usize)
        }
        SearchMode::Sampled { samples, seed } => {
            let opts = SearchOptions { random_starts: samples.max(1), swap_passes: 2, seed };
            let (set, total) = search_lambda(std::slice::from_ref(code), list_bound, &[], &opts);
            report.evaluations = samples as u128;
            (set, total as usize)
        }
    };

    report.witness_center = Some(plurality_center(code, &set)?);
    report.witness_list_size = set.len();
    report.witness_list = set;
    report.witness_agreement = Some(sum);
    report.verdict = if exceeds(sum, rho, n, list_bound) {
        Verdict::Violated
    } else if matches!(mode, SearchMode::Exhaustive) {
        Verdict::Holds
    } else {
        Verdict::NoCounterexample
    };
    Ok(report)
}

/// Smallest `L` for which the code is `(rho, L)`-list decodable: one more than
/// the largest ball population. Exhaustive over centers.
pub fn min_list_bound(code: &CodeMatrix, rho: Ratio64, cap: u128) -> Result<usize> {
    // with L = N the exhaustive pass always runs and reports the fullest ball
    let rep = is_list_decodable(code, rho, code.len(), SearchMode::Exhaustive, cap)?;
    Ok(rep.witness_list_size + 1)
}
