use num_bigint::BigUint;
use num_traits::One;

use super::matrix::CodeMatrix;
use crate::combin::{binomial, next_word, pow_u128};
use crate::error::{Error, Result};
use crate::ratio::Ratio64;

#[inline]
pub(crate) fn dist(x: &[u64], y: &[u64]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

pub fn hamming_distance(x: &[u64], y: &[u64]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::input(format!("length mismatch: {} vs {}", x.len(), y.len())));
    }
    Ok(dist(x, y))
}

pub fn agreement(x: &[u64], y: &[u64]) -> Result<usize> {
    Ok(x.len() - hamming_distance(x, y)?)
}

/// Minimum absolute distance over pairs of columns with different values.
pub fn min_abs_distance(code: &CodeMatrix) -> Result<usize> {
    let mut best: Option<usize> = None;
    for i in 0..code.len() {
        let ci = code.codeword(i);
        for j in i + 1..code.len() {
            let d = dist(ci, code.codeword(j));
            if d > 0 && best.is_none_or(|b| d < b) {
                best = Some(d);
                if d == 1 {
                    return Ok(1);
                }
            }
        }
    }
    best.ok_or_else(|| Error::Degenerate("fewer than two distinct codewords".into()))
}

/// Relative minimum distance, exhaustive over column pairs.
pub fn code_min_distance(code: &CodeMatrix) -> Result<Ratio64> {
    Ok(Ratio64::new(min_abs_distance(code)? as u64, code.n() as u64))
}

/// Size of the most frequent value in `buf`; reorders `buf`.
#[inline]
pub(crate) fn plurality_of(buf: &mut [u64]) -> usize {
    match buf.len() {
        0 => 0,
        1 => 1,
        2 => 1 + (buf[0] == buf[1]) as usize,
        _ => {
            buf.sort_unstable();
            let mut best = 1;
            let mut run = 1;
            for w in buf.windows(2) {
                if w[0] == w[1] {
                    run += 1;
                    best = best.max(run);
                } else {
                    run = 1;
                }
            }
            best
        }
    }
}

pub(crate) fn check_lambda(code: &CodeMatrix, lambda: &[usize]) -> Result<()> {
    if lambda.is_empty() {
        return Err(Error::input("index set is empty"));
    }
    let mut sorted = lambda.to_vec();
    sorted.sort_unstable();
    if let Some(&bad) = sorted.iter().find(|&&i| i >= code.len()) {
        return Err(Error::input(format!("index {bad} out of range (N = {})", code.len())));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::input("index set contains a repeated index"));
    }
    Ok(())
}

/// Sum of per-row pluralities over the columns in `lambda`, without validation.
pub(crate) fn plurality_sum_unchecked(code: &CodeMatrix, lambda: &[usize], buf: &mut Vec<u64>) -> usize {
    let mut total = 0;
    for row in 0..code.n() {
        buf.clear();
        buf.extend(lambda.iter().map(|&c| code.symbol(row, c)));
        total += plurality_of(buf);
    }
    total
}

/// Entry `j` is the count of the most frequent symbol in row `j` among the columns in `lambda`.
pub fn plurality_vector(code: &CodeMatrix, lambda: &[usize]) -> Result<Vec<usize>> {
    check_lambda(code, lambda)?;
    let mut buf = Vec::with_capacity(lambda.len());
    Ok((0..code.n())
        .map(|row| {
            buf.clear();
            buf.extend(lambda.iter().map(|&c| code.symbol(row, c)));
            plurality_of(&mut buf)
        })
        .collect())
}

/// `max_z sum_{c in lambda} agr(c, z)`, computed as the sum of row pluralities.
pub fn max_agreement_sum(code: &CodeMatrix, lambda: &[usize]) -> Result<usize> {
    check_lambda(code, lambda)?;
    Ok(plurality_sum_unchecked(code, lambda, &mut Vec::with_capacity(lambda.len())))
}

/// Same quantity as [`max_agreement_sum`] by enumerating all `q^n` centers.
pub fn max_agreement_sum_exhaustive(code: &CodeMatrix, lambda: &[usize], cap: u128) -> Result<usize> {
    check_lambda(code, lambda)?;
    let needed = pow_u128(code.q(), code.n() as u64);
    if needed > cap {
        return Err(Error::Budget { what: "center enumeration", needed, cap });
    }
    let mut z = vec![0u64; code.n()];
    let mut best = 0;
    loop {
        let s: usize = lambda.iter().map(|&c| code.n() - dist(code.codeword(c), &z)).sum();
        best = best.max(s);
        if !next_word(&mut z, code.q()) {
            break;
        }
    }
    Ok(best)
}

/// Indices of codewords within absolute distance `radius` of `z`.
pub fn ball_members(code: &CodeMatrix, z: &[u64], radius: usize) -> Result<Vec<usize>> {
    code.check_word(z)?;
    Ok(code
        .codewords()
        .enumerate()
        .filter(|(_, c)| dist(c, z) <= radius)
        .map(|(i, _)| i)
        .collect())
}

/// `sum_{i <= r} C(n, i) (q - 1)^i`.
pub fn hamming_ball_volume(q: u64, n: u64, r: u64) -> Result<BigUint> {
    if r > n {
        return Err(Error::input(format!("radius {r} exceeds block length {n}")));
    }
    if q < 2 {
        return Err(Error::input("alphabet size must be at least 2"));
    }
    let mut total = BigUint::default();
    let mut pow = BigUint::one();
    for i in 0..=r {
        total += binomial(n, i) * &pow;
        pow *= q - 1;
    }
    Ok(total)
}

/// Number of words within `r1` of `c` and within `r2` of `y`, by enumeration of `q^n` words.
pub fn ball_intersection_size(q: u64, c: &[u64], y: &[u64], r1: usize, r2: usize, cap: u128) -> Result<u128> {
    if c.len() != y.len() {
        return Err(Error::input(format!("length mismatch: {} vs {}", c.len(), y.len())));
    }
    if c.iter().chain(y).any(|&s| s >= q) {
        return Err(Error::input(format!("symbol outside alphabet of size {q}")));
    }
    let needed = pow_u128(q, c.len() as u64);
    if needed > cap {
        return Err(Error::Budget { what: "word enumeration", needed, cap });
    }
    let mut w = vec![0u64; c.len()];
    let mut count = 0u128;
    loop {
        if dist(&w, c) <= r1 && dist(&w, y) <= r2 {
            count += 1;
        }
        if !next_word(&mut w, q) {
            break;
        }
    }
    Ok(count)
}
