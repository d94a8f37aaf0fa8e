//! Concatenation of a `q_out`-ary outer code with the binary Hadamard code,
//! and the randomized list decoder: list-decode every inner block, keep one
//! random candidate per block, then list-decode the outer code by brute force.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::codes::{dist, CodeMatrix};
use crate::constructions::hadamard_word;
use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone)]
pub struct ConcatCode {
    outer: CodeMatrix,
    inner_k: u32,
    /// Hadamard codeword of every inner message.
    table: Vec<Vec<u64>>,
}

impl ConcatCode {
    /// Outer symbol `s` is sent as the Hadamard encoding of message `s`.
    pub fn new(outer: CodeMatrix, inner_k: u32) -> Result<Self> {
        if inner_k == 0 || inner_k > 16 {
            return Err(Error::input(format!("inner dimension must be in [1, 16], got {inner_k}")));
        }
        if outer.q() > 1u64 << inner_k {
            return Err(Error::input(format!("2^{inner_k} inner messages cannot carry {} outer symbols", outer.q())));
        }
        let table = (0..1u64 << inner_k).map(|m| hadamard_word(inner_k, m)).collect();
        Ok(ConcatCode { outer, inner_k, table })
    }

    pub fn outer(&self) -> &CodeMatrix {
        &self.outer
    }

    pub fn inner_k(&self) -> u32 {
        self.inner_k
    }

    pub fn block_len(&self) -> usize {
        1 << self.inner_k
    }

    pub fn encoded_len(&self) -> usize {
        self.outer.n() * self.block_len()
    }
}

pub fn concat_encode(code: &ConcatCode, index: usize) -> Result<Vec<u64>> {
    if index >= code.outer.len() {
        return Err(Error::input(format!("codeword index {index} out of range (N = {})", code.outer.len())));
    }
    Ok(code.outer.codeword(index).iter().flat_map(|&s| code.table[s as usize].iter().copied()).collect())
}

fn abs_radius_f64(radius: f64, len: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&radius) {
        return Err(Error::input(format!("relative radius {radius} outside [0, 1]")));
    }
    // tolerate radii like 3/8 that are not exact in binary
    Ok((radius * len as f64 + 1e-9).floor() as usize)
}

/// Every message whose Hadamard codeword lies within relative distance
/// `radius` of `y`. The length of `y` must be a power of two.
pub fn hadamard_list_decode(y: &[u64], radius: f64) -> Result<Vec<u64>> {
    let len = y.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::input(format!("received block length {len} is not a power of two >= 2")));
    }
    if y.iter().any(|&b| b > 1) {
        return Err(Error::input("received block is not binary"));
    }
    let k = len.trailing_zeros();
    let r = abs_radius_f64(radius, len)?;
    Ok((0..1u64 << k).filter(|&m| dist(&hadamard_word(k, m), y) <= r).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcatDecodeResult {
    /// Outer codeword indices within the outer radius of `intermediate`.
    pub candidates: Vec<usize>,
    /// The word `y'` handed to the outer decoder.
    pub intermediate: Vec<u64>,
    /// Inner list size at every outer position, before the random pick.
    pub inner_list_sizes: Vec<usize>,
}

/// Decodes `y`: inner lists at radius `1/2 - eps/2`, one uniform pick per
/// position (a uniform outer symbol when the list is empty), then all outer
/// codewords within `outer_radius` of the picks. Position `i` draws from
/// `derive_seed(seed, "position", i)`.
pub fn concat_list_decode(code: &ConcatCode, y: &[u64], eps: f64, seed: u64, outer_radius: f64) -> Result<ConcatDecodeResult> {
    if y.len() != code.encoded_len() {
        return Err(Error::input(format!("received word has length {}, expected {}", y.len(), code.encoded_len())));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::input(format!("eps = {eps} outside (0, 1]")));
    }
    let q_out = code.outer.q();
    let inner_radius = 0.5 - eps / 2.0;
    let b = code.block_len();
    let mut intermediate = Vec::with_capacity(code.outer.n());
    let mut inner_list_sizes = Vec::with_capacity(code.outer.n());
    for (i, block) in y.chunks(b).enumerate() {
        let list: Vec<u64> = hadamard_list_decode(block, inner_radius)?.into_iter().filter(|&m| m < q_out).collect();
        let mut rng = seed::rng(seed::derive_seed(seed, "position", i as u64));
        let pick = if list.is_empty() { rng.random_range(0..q_out) } else { list[rng.random_range(0..list.len())] };
        intermediate.push(pick);
        inner_list_sizes.push(list.len());
    }
    let r = abs_radius_f64(outer_radius, code.outer.n())?;
    let candidates = code.outer.codewords().enumerate().filter(|(_, c)| dist(c, &intermediate) <= r).map(|(j, _)| j).collect();
    Ok(ConcatDecodeResult { candidates, intermediate, inner_list_sizes })
}

/// The outer radius `1 - eps^3 / 8`.
pub fn default_outer_radius(eps: f64) -> f64 {
    1.0 - eps.powi(3) / 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorruptionPattern {
    /// Whole inner blocks replaced by the encoding of the next outer symbol,
    /// from the first block on; leftover budget flips the leading bits of the
    /// following block.
    Concentrated,
    /// The same number of leading bits flipped in every block.
    Spread,
}

/// Corrupts the encoding of outer codeword `index` in at most
/// `floor(fraction * len)` bits, following a fixed deterministic pattern.
/// A non-positive fraction leaves the word intact.
pub fn corrupt(code: &ConcatCode, index: usize, fraction: f64, pattern: CorruptionPattern) -> Result<Vec<u64>> {
    let mut y = concat_encode(code, index)?;
    if fraction <= 0.0 {
        return Ok(y);
    }
    if fraction > 1.0 {
        return Err(Error::input(format!("corruption fraction {fraction} exceeds 1")));
    }
    let b = code.block_len();
    let q_out = code.outer.q();
    let mut budget = (fraction * y.len() as f64 + 1e-9).floor() as usize;
    match pattern {
        CorruptionPattern::Concentrated => {
            let word = code.outer.codeword(index).to_vec();
            for (pos, &s) in word.iter().enumerate() {
                let swap = &code.table[((s + 1) % q_out) as usize];
                let block = &mut y[pos * b..(pos + 1) * b];
                let cost = dist(block, swap);
                if cost <= budget {
                    block.copy_from_slice(swap);
                    budget -= cost;
                } else {
                    for bit in block.iter_mut().take(budget) {
                        *bit ^= 1;
                    }
                    break;
                }
            }
        }
        CorruptionPattern::Spread => {
            let per_block = budget / code.outer.n();
            for block in y.chunks_mut(b) {
                for bit in block.iter_mut().take(per_block) {
                    *bit ^= 1;
                }
            }
        }
    }
    Ok(y)
}
