//! Base-code generators and the cluster code used for the subcode lower bound.

mod cluster;

use std::collections::BTreeMap;

use rand::Rng as _;

use crate::codes::{Alphabet, CodeMatrix};
use crate::combin::pow_u128;
use crate::error::{Error, Result};
use crate::field::{digits, PrimeField};
use crate::ratio::Ratio64;
use crate::seed;

pub use cluster::{
    build_cluster_code, center_gammas, cluster_capture_trial, cluster_params, smallest_feasible_n, verify_random_centers, CaptureOutcome, CenterCheck,
    ClusterCode, ClusterParams,
};

/// `N` i.i.d. uniform words of length `n` over `[0, q)`.
pub fn random_code(q: u64, n: usize, big_n: usize, seed: u64) -> Result<CodeMatrix> {
    let alphabet = Alphabet::new(q)?;
    if n == 0 || big_n == 0 {
        return Err(Error::input("random code needs n >= 1 and N >= 1"));
    }
    let mut rng = seed::rng(seed);
    let data = (0..n * big_n).map(|_| rng.random_range(0..q)).collect();
    CodeMatrix::from_flat(alphabet, n, data)
}

/// A uniform `n x k` generator over `F_q`, returned as `k` basis columns.
pub fn random_generator(q: u64, n: usize, k: usize, seed: u64) -> Result<CodeMatrix> {
    PrimeField::new(q)?;
    if k == 0 {
        return Err(Error::input("a generator needs at least one column"));
    }
    random_code(q, n, k, seed)
}

/// All `q^k` combinations of the generator's columns; message `m` (big-endian
/// digits `m_1..m_k`) maps to column `m` of the result.
pub fn linear_span(generator: &CodeMatrix, cap: u128) -> Result<CodeMatrix> {
    let q = generator.q();
    let field = PrimeField::new(q)?;
    if !generator.alphabet().is_prime_field() {
        return Err(Error::input("generator must be over a prime field"));
    }
    let k = generator.len();
    let total = pow_u128(q, k as u64);
    if total > cap {
        return Err(Error::Budget { what: "linear code messages", needed: total, cap });
    }
    let n = generator.n();
    let mut data = Vec::with_capacity(total as usize * n);
    for m in 0..total as u64 {
        let msg = digits(m, q, k);
        let mut word = vec![0u64; n];
        for (j, &a) in msg.iter().enumerate() {
            if a != 0 {
                for (w, &g) in word.iter_mut().zip(generator.codeword(j)) {
                    *w = field.add(*w, field.mul(a, g));
                }
            }
        }
        data.extend(word);
    }
    CodeMatrix::from_flat(generator.alphabet(), n, data)
}

/// Random linear `[n, k]` code over `F_q`: all `q^k` encodings under a uniform
/// generator. `k = 0` gives the zero code.
pub fn random_linear_code(q: u64, n: usize, k: usize, seed: u64, cap: u128) -> Result<CodeMatrix> {
    PrimeField::new(q)?;
    if k > n {
        return Err(Error::input(format!("dimension k = {k} exceeds length n = {n}")));
    }
    if n == 0 {
        return Err(Error::input("block length must be at least 1"));
    }
    if k == 0 {
        return CodeMatrix::from_flat(Alphabet::new(q)?, n, vec![0; n]);
    }
    linear_span(&random_generator(q, n, k, seed)?, cap)
}

/// Reed-Solomon code: evaluations of every polynomial of degree `< k`.
/// Message `m` has coefficient of `x^i` equal to the `i`-th least significant
/// base-`q` digit of `m`.
pub fn reed_solomon(q: u64, k: usize, points: &[u64], cap: u128) -> Result<CodeMatrix> {
    let field = PrimeField::new(q)?;
    if points.is_empty() {
        return Err(Error::input("need at least one evaluation point"));
    }
    if let Some(&p) = points.iter().find(|&&p| p >= q) {
        return Err(Error::input(format!("evaluation point {p} outside F_{q}")));
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::input("evaluation points must be distinct"));
    }
    if k == 0 || k > points.len() {
        return Err(Error::input(format!("need 1 <= k <= {} points, got k = {k}", points.len())));
    }
    let total = pow_u128(q, k as u64);
    if total > cap {
        return Err(Error::Budget { what: "Reed-Solomon messages", needed: total, cap });
    }
    let mut data = Vec::with_capacity(total as usize * points.len());
    for m in 0..total as u64 {
        let mut coeffs = digits(m, q, k);
        coeffs.reverse();
        data.extend(points.iter().map(|&x| field.eval_poly(&coeffs, x)));
    }
    CodeMatrix::from_flat(Alphabet::new(q)?, points.len(), data)
}

/// Hadamard codeword of message `m`: bit `x` is `<x, m>` mod 2.
pub fn hadamard_word(k: u32, m: u64) -> Vec<u64> {
    (0..1u64 << k).map(|x| ((x & m).count_ones() % 2) as u64).collect()
}

/// Binary Hadamard code of length and size `2^k`; column `m` encodes `m`.
pub fn hadamard(k: u32) -> Result<CodeMatrix> {
    if k == 0 || k > 12 {
        return Err(Error::input(format!("Hadamard dimension must be in [1, 12], got {k}")));
    }
    CodeMatrix::from_codewords(2, (0..1u64 << k).map(|m| hadamard_word(k, m)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub n: usize,
    pub total: usize,
    /// weight -> number of codewords (with multiplicity).
    pub histogram: BTreeMap<usize, u64>,
}

impl WeightDistribution {
    /// Fraction of codewords agreeing with the zero word on at least `beta n` positions.
    pub fn a_beta(&self, beta: Ratio64) -> f64 {
        let n = self.n as u128;
        let count: u64 = self
            .histogram
            .iter()
            .filter(|(&w, _)| (n - w as u128) * *beta.denom() as u128 >= *beta.numer() as u128 * n)
            .map(|(_, &c)| c)
            .sum();
        count as f64 / self.total as f64
    }
}

pub fn weight_distribution(code: &CodeMatrix) -> WeightDistribution {
    let mut histogram = BTreeMap::new();
    for c in code.codewords() {
        *histogram.entry(c.iter().filter(|&&s| s != 0).count()).or_insert(0) += 1;
    }
    WeightDistribution { n: code.n(), total: code.len(), histogram }
}
