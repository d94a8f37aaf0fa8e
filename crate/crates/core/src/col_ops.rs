//! Random column operations: subcodes drawn with or without replacement.

use num_rational::BigRational;
use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::codes::{dist, CodeMatrix};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::ratio::{abs_radius, Ratio64};
use crate::row_ops::Replacement;
use crate::seed;

/// Subcode size, either as a retention fraction of `N0` or an explicit count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeSpec {
    Fraction(f64),
    Count(usize),
}

impl SizeSpec {
    /// `max(1, round(p N0))` with ties rounding up, or the explicit count.
    pub fn resolve(self, n0_cols: usize) -> Result<usize> {
        match self {
            SizeSpec::Count(n) => Ok(n),
            SizeSpec::Fraction(p) => {
                if !(p.is_finite() && p > 0.0) {
                    return Err(Error::input(format!("retention fraction must be positive, got {p}")));
                }
                Ok(((p * n0_cols as f64 + 0.5).floor() as usize).max(1))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubcodeDraw {
    /// Retention fraction; for an explicit count this is `N / N0`.
    pub p: f64,
    #[serde(rename = "N")]
    pub size: usize,
    pub replacement: Replacement,
    pub seed: u64,
    pub indices: Vec<usize>,
}

pub fn draw_subcode(c0: &CodeMatrix, spec: SizeSpec, replacement: Replacement, seed: u64) -> Result<(CodeMatrix, SubcodeDraw)> {
    let big_n0 = c0.len();
    let size = spec.resolve(big_n0)?;
    if size == 0 {
        return Err(Error::input("subcode size must be at least 1"));
    }
    let mut rng = seed::rng(seed);
    let indices: Vec<usize> = match replacement {
        Replacement::With => (0..size).map(|_| rng.random_range(0..big_n0)).collect(),
        Replacement::Without => {
            if size > big_n0 {
                return Err(Error::input(format!("cannot draw {size} distinct codewords from {big_n0}")));
            }
            index::sample(&mut rng, big_n0, size).into_vec()
        }
    };
    let p = match spec {
        SizeSpec::Fraction(p) => p,
        SizeSpec::Count(n) => n as f64 / big_n0 as f64,
    };
    let sub = c0.select_columns(&indices)?;
    Ok((sub, SubcodeDraw { p, size, replacement, seed, indices }))
}

/// Subcode of a linear code drawn as images of uniform message vectors.
/// `generator` holds the `k` basis codewords as columns.
pub fn draw_linear_subcode(generator: &CodeMatrix, size: usize, seed: u64) -> Result<CodeMatrix> {
    let q = generator.q();
    let field = PrimeField::new(q)?;
    if !generator.alphabet().is_prime_field() {
        return Err(Error::input("linear subcodes need a code over a prime field"));
    }
    if size == 0 {
        return Err(Error::input("subcode size must be at least 1"));
    }
    let mut rng = seed::rng(seed);
    let n = generator.n();
    let k = generator.len();
    let mut data = Vec::with_capacity(size * n);
    for _ in 0..size {
        let msg: Vec<u64> = (0..k).map(|_| rng.random_range(0..q)).collect();
        let mut word = vec![0u64; n];
        for (j, &a) in msg.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(generator.codeword(j)) {
                *w = field.add(*w, field.mul(a, g));
            }
        }
        data.extend(word);
    }
    CodeMatrix::from_flat(generator.alphabet(), n, data)
}

pub fn distinct_count(code: &CodeMatrix) -> usize {
    code.distinct_count()
}

/// `p N0 * |B(z, floor(rho n)) ∩ C0| / N0`, the expected number of subcode
/// members in the ball when each of `p N0` draws is uniform over `C0`.
pub fn expected_ball_load(c0: &CodeMatrix, z: &[u64], rho: Ratio64, p: &BigRational) -> Result<BigRational> {
    c0.check_word(z)?;
    let r = abs_radius(rho, c0.n());
    let count = c0.codewords().filter(|c| dist(c, z) <= r).count();
    Ok(p * BigRational::from_integer(count.into()))
}

/// Retention parameter `1 / (q^(eps n) L0)`.
pub fn subcode_retention(q: u64, eps: f64, n: usize, l0: usize) -> Result<f64> {
    if q < 2 || !(eps > 0.0) || l0 == 0 {
        return Err(Error::input("need q >= 2, eps > 0, L0 >= 1"));
    }
    Ok(1.0 / ((q as f64).powf(eps * n as f64) * l0 as f64))
}
