//! Random row operations: each output row is an inner product of the input
//! rows, an aggregation of a few input rows into one product-alphabet symbol,
//! or a per-coordinate hash to a smaller alphabet.

mod prob;

use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::codes::{Alphabet, CodeMatrix};
use crate::combin::{for_each_permutation, next_word, pow_u128};
use crate::error::{Error, Result};
use crate::field::{digits, is_prime};
use crate::seed;

pub use prob::{
    aggregation_agreement_probability, aggregation_miss_approx, expected_pairwise_distance,
    injectivity_failure_bound, inner_product_difference_probability, row_difference_probability,
    xor_parity_approx, xor_parity_probability, InjectivityBound, PairDistanceSummary,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOpKind {
    /// `n` i.i.d. uniform coordinates.
    Sampling,
    /// `n` distinct uniform coordinates.
    Puncturing,
    /// `n` i.i.d. inner products with uniform weight-`t` vectors.
    Xor,
    /// `n` i.i.d. uniform `t`-subsets, aggregated into one symbol each.
    Aggregate,
    /// A uniform partition of the coordinates into `n` blocks of size `t`.
    Fold,
    /// Coordinate-wise hashing of `q^k`-ary symbols to `F_q`; `n = n0`.
    HashReduce,
}

impl RowOpKind {
    pub fn replacement(self) -> Replacement {
        match self {
            RowOpKind::Puncturing | RowOpKind::Fold => Replacement::Without,
            _ => Replacement::With,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RowOpKind::Sampling => "sampling",
            RowOpKind::Puncturing => "puncturing",
            RowOpKind::Xor => "xor",
            RowOpKind::Aggregate => "aggregate",
            RowOpKind::Fold => "fold",
            RowOpKind::HashReduce => "hash_reduce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Replacement {
    With,
    Without,
}

/// One basic row operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOp {
    /// `sum_i v_i c_i` over `F_q`.
    InnerProduct { v: Vec<u64> },
    /// The tuple `(c_s)_{s in set}`, set ascending, packed big-endian.
    Aggregate { set: Vec<usize> },
    /// `<m, digits(c_coord)> + b` over `F_q`.
    Hash { coord: usize, m: Vec<u64>, b: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOpParams {
    /// Input block length.
    pub n0: usize,
    /// Output block length.
    pub n: usize,
    /// Support or block size; ignored by sampling, puncturing and hashing.
    pub t: usize,
    /// Field order for inner products and hashing; ignored otherwise.
    pub q: u64,
    /// Input symbols are `k`-tuples over `F_q` when hashing; ignored otherwise.
    pub k: u32,
}

impl RowOpParams {
    pub fn new(n0: usize, n: usize, t: usize) -> Self {
        RowOpParams { n0, n, t, q: 2, k: 1 }
    }

    pub fn with_field(mut self, q: u64) -> Self {
        self.q = q;
        self
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = k;
        self
    }
}

/// A drawn `n`-tuple of basic row operations, replayable without the RNG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOpTuple {
    pub kind: RowOpKind,
    pub seed: u64,
    pub replacement: Replacement,
    pub n0: usize,
    pub t: usize,
    pub q: u64,
    pub ops: Vec<RowOp>,
}

impl RowOpTuple {
    pub fn n(&self) -> usize {
        self.ops.len()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Checks that `params` make sense for `kind`; returns the effective `t`.
pub fn validate_params(kind: RowOpKind, p: &RowOpParams) -> Result<usize> {
    if p.n0 == 0 || p.n == 0 {
        return Err(Error::input("n0 and n must be at least 1"));
    }
    let t = match kind {
        RowOpKind::Sampling | RowOpKind::HashReduce => 1,
        RowOpKind::Puncturing => {
            if p.n > p.n0 {
                return Err(Error::input(format!("puncturing needs n <= n0, got n = {} > n0 = {}", p.n, p.n0)));
            }
            1
        }
        RowOpKind::Xor | RowOpKind::Aggregate | RowOpKind::Fold => {
            if p.t == 0 || p.t > p.n0 {
                return Err(Error::input(format!("t must lie in [1, n0 = {}], got {}", p.n0, p.t)));
            }
            p.t
        }
    };
    match kind {
        RowOpKind::Fold => {
            if !p.n0.is_multiple_of(t) {
                return Err(Error::input(format!("t = {t} does not divide n0 = {}", p.n0)));
            }
            if p.n * t != p.n0 {
                return Err(Error::input(format!("folding needs n = n0 / t = {}, got n = {}", p.n0 / t, p.n)));
            }
        }
        RowOpKind::Xor | RowOpKind::HashReduce
            if !is_prime(p.q) => {
                return Err(Error::input(format!("field order q = {} is not prime", p.q)));
            }
        _ => {}
    }
    if kind == RowOpKind::HashReduce {
        if p.n != p.n0 {
            return Err(Error::input(format!("hash reduction keeps the length: n = {} differs from n0 = {}", p.n, p.n0)));
        }
        if p.k == 0 || p.q.checked_pow(p.k).is_none() {
            return Err(Error::input(format!("input alphabet q^k with q = {}, k = {} is invalid", p.q, p.k)));
        }
    }
    Ok(t)
}

fn sorted_subset(rng: &mut seed::Rng, n0: usize, t: usize) -> Vec<usize> {
    let mut s = index::sample(rng, n0, t).into_vec();
    s.sort_unstable();
    s
}

fn weight_t_vector(rng: &mut seed::Rng, n0: usize, t: usize, q: u64) -> Vec<u64> {
    let mut v = vec![0u64; n0];
    for i in index::sample(rng, n0, t) {
        v[i] = if q == 2 { 1 } else { rng.random_range(1..q) };
    }
    v
}

/// Draws a random `n`-tuple of row operations of the given kind.
pub fn draw_row_operation(kind: RowOpKind, params: &RowOpParams, seed: u64) -> Result<RowOpTuple> {
    let t = validate_params(kind, params)?;
    let mut rng = seed::rng(seed);
    let (n0, n, q) = (params.n0, params.n, params.q);
    let ops = match kind {
        RowOpKind::Sampling => (0..n).map(|_| RowOp::Aggregate { set: vec![rng.random_range(0..n0)] }).collect(),
        RowOpKind::Puncturing => index::sample(&mut rng, n0, n)
            .into_iter()
            .map(|i| RowOp::Aggregate { set: vec![i] })
            .collect(),
        RowOpKind::Xor => (0..n).map(|_| RowOp::InnerProduct { v: weight_t_vector(&mut rng, n0, t, q) }).collect(),
        RowOpKind::Aggregate => (0..n).map(|_| RowOp::Aggregate { set: sorted_subset(&mut rng, n0, t) }).collect(),
        RowOpKind::Fold => {
            let mut perm: Vec<usize> = (0..n0).collect();
            perm.shuffle(&mut rng);
            perm.chunks(t)
                .map(|c| {
                    let mut set = c.to_vec();
                    set.sort_unstable();
                    RowOp::Aggregate { set }
                })
                .collect()
        }
        RowOpKind::HashReduce => (0..n)
            .map(|coord| RowOp::Hash {
                coord,
                m: (0..params.k).map(|_| rng.random_range(0..q)).collect(),
                b: rng.random_range(0..q),
            })
            .collect(),
    };
    Ok(RowOpTuple { kind, seed, replacement: kind.replacement(), n0, t, q, ops })
}

/// Output alphabet of `f` on codes over `input`, after checking compatibility.
pub fn output_alphabet(input: Alphabet, f: &RowOpTuple) -> Result<Alphabet> {
    match f.kind {
        RowOpKind::Xor => {
            if !input.is_prime_field() || input.size() != f.q {
                return Err(Error::input(format!(
                    "inner products over F_{} need a code over F_{}, got alphabet of size {}",
                    f.q,
                    f.q,
                    input.size()
                )));
            }
            Ok(input)
        }
        RowOpKind::HashReduce => {
            let k = match f.ops.first() {
                Some(RowOp::Hash { m, .. }) => m.len() as u32,
                _ => return Err(Error::input("hash tuple without hash operations")),
            };
            if f.q.checked_pow(k) != Some(input.size()) {
                return Err(Error::input(format!(
                    "hash from {}^{} symbols applied to alphabet of size {}",
                    f.q,
                    k,
                    input.size()
                )));
            }
            Alphabet::new(f.q)
        }
        _ => {
            if f.t == 1 {
                Ok(input)
            } else {
                input.power(f.t as u32)
            }
        }
    }
}

#[inline]
fn apply_one(op: &RowOp, word: &[u64], in_size: u64, q: u64, kbuf: usize) -> u64 {
    match op {
        RowOp::InnerProduct { v } => {
            let mut acc: u64 = 0;
            for (a, b) in v.iter().zip(word) {
                if *a != 0 {
                    acc = (acc + a * b) % q;
                }
            }
            acc
        }
        RowOp::Aggregate { set } => set.iter().fold(0u64, |acc, &s| acc * in_size + word[s]),
        RowOp::Hash { coord, m, b } => {
            let ds = digits(word[*coord], q, kbuf);
            let mut acc = *b;
            for (mi, di) in m.iter().zip(&ds) {
                acc = (acc + mi * di) % q;
            }
            acc
        }
    }
}

fn check_ops(c0: &CodeMatrix, f: &RowOpTuple) -> Result<()> {
    if f.n0 != c0.n() {
        return Err(Error::input(format!("tuple drawn for n0 = {}, code has n = {}", f.n0, c0.n())));
    }
    if f.ops.is_empty() {
        return Err(Error::input("empty row-operation tuple"));
    }
    for op in &f.ops {
        let ok = match op {
            RowOp::InnerProduct { v } => v.len() == f.n0 && v.iter().all(|&x| x < f.q),
            RowOp::Aggregate { set } => set.len() == f.t && set.iter().all(|&s| s < f.n0),
            RowOp::Hash { coord, m, b } => *coord < f.n0 && *b < f.q && m.iter().all(|&x| x < f.q),
        };
        if !ok {
            return Err(Error::input(format!("row operation {op:?} does not fit n0 = {}, t = {}, q = {}", f.n0, f.t, f.q)));
        }
    }
    Ok(())
}

/// Applies `f` to the listed columns of `c0` only; output column `j` is the
/// image of `c0`'s column `cols[j]`.
pub fn apply_to_columns(c0: &CodeMatrix, f: &RowOpTuple, cols: &[usize]) -> Result<CodeMatrix> {
    check_ops(c0, f)?;
    let alphabet = output_alphabet(c0.alphabet(), f)?;
    if let Some(&bad) = cols.iter().find(|&&c| c >= c0.len()) {
        return Err(Error::input(format!("column {bad} out of range")));
    }
    let in_size = c0.alphabet().size();
    let k = match f.ops.first() {
        Some(RowOp::Hash { m, .. }) => m.len(),
        _ => 0,
    };
    let n = f.ops.len();
    let mut data = Vec::with_capacity(n * cols.len());
    for &c in cols {
        let word = c0.codeword(c);
        data.extend(f.ops.iter().map(|op| apply_one(op, word, in_size, f.q, k)));
    }
    CodeMatrix::from_flat(alphabet, n, data)
}

/// `f(C0)`: row `i` of the result is `r_i(C0)`; column identity is preserved.
pub fn apply_row_op(c0: &CodeMatrix, f: &RowOpTuple) -> Result<CodeMatrix> {
    let cols: Vec<usize> = (0..c0.len()).collect();
    apply_to_columns(c0, f, &cols)
}

/// Every basic row operation in the support of one row's distribution, each
/// equally likely. Applies to the i.i.d. kinds (sampling, xor, aggregate).
pub fn enumerate_basic_ops(kind: RowOpKind, params: &RowOpParams) -> Result<Vec<RowOp>> {
    let t = validate_params(kind, params)?;
    let n0 = params.n0;
    let mut out = Vec::new();
    match kind {
        RowOpKind::Sampling => out.extend((0..n0).map(|i| RowOp::Aggregate { set: vec![i] })),
        RowOpKind::Aggregate => crate::combin::for_each_subset(n0, t, |s| out.push(RowOp::Aggregate { set: s.to_vec() })),
        RowOpKind::Xor => {
            let q = params.q;
            crate::combin::for_each_subset(n0, t, |s| {
                let mut coeffs = vec![1u64; t];
                loop {
                    let mut v = vec![0u64; n0];
                    for (&i, &a) in s.iter().zip(&coeffs) {
                        v[i] = a;
                    }
                    out.push(RowOp::InnerProduct { v });
                    // next coefficient vector in [1, q)^t
                    let mut shifted: Vec<u64> = coeffs.iter().map(|a| a - 1).collect();
                    if !next_word(&mut shifted, q - 1) {
                        break;
                    }
                    coeffs = shifted.iter().map(|a| a + 1).collect();
                }
            });
        }
        _ => return Err(Error::input(format!("{} rows are not drawn independently", kind.name()))),
    }
    Ok(out)
}

/// The full support of the tuple distribution, each tuple equally likely.
/// Meant for exact oracles on tiny instances.
pub fn enumerate_tuples(kind: RowOpKind, params: &RowOpParams, cap: u128) -> Result<Vec<RowOpTuple>> {
    let t = validate_params(kind, params)?;
    let (n0, n) = (params.n0, params.n);
    let make = |ops: Vec<RowOp>| RowOpTuple { kind, seed: 0, replacement: kind.replacement(), n0, t, q: params.q, ops };
    match kind {
        RowOpKind::Sampling | RowOpKind::Aggregate | RowOpKind::Xor => {
            let basic = enumerate_basic_ops(kind, params)?;
            let total = pow_u128(basic.len() as u64, n as u64);
            if total > cap {
                return Err(Error::Budget { what: "row-operation tuples", needed: total, cap });
            }
            let mut idx = vec![0u64; n];
            let mut out = Vec::with_capacity(total as usize);
            loop {
                out.push(make(idx.iter().map(|&i| basic[i as usize].clone()).collect()));
                if !next_word(&mut idx, basic.len() as u64) {
                    break;
                }
            }
            Ok(out)
        }
        RowOpKind::Puncturing | RowOpKind::Fold => {
            let total = (1..=n0 as u128).product::<u128>();
            if total > cap {
                return Err(Error::Budget { what: "permutations", needed: total, cap });
            }
            // every permutation, chunked; distinct chunkings are equally likely
            let items: Vec<usize> = (0..n0).collect();
            let mut seen = std::collections::BTreeSet::new();
            for_each_permutation(&items, |perm| {
                let ops: Vec<Vec<usize>> = if kind == RowOpKind::Puncturing {
                    perm[..n].iter().map(|&i| vec![i]).collect()
                } else {
                    perm.chunks(t)
                        .map(|c| {
                            let mut s = c.to_vec();
                            s.sort_unstable();
                            s
                        })
                        .collect()
                };
                seen.insert(ops);
            });
            Ok(seen
                .into_iter()
                .map(|sets| make(sets.into_iter().map(|set| RowOp::Aggregate { set }).collect()))
                .collect())
        }
        RowOpKind::HashReduce => {
            let (q, k) = (params.q, params.k as u64);
            let per_row = pow_u128(q, k + 1);
            let total = pow_u128(per_row.min(u64::MAX as u128) as u64, n as u64);
            if total > cap {
                return Err(Error::Budget { what: "hash tuples", needed: total, cap });
            }
            let mut idx = vec![0u64; n];
            let mut out = Vec::new();
            loop {
                let ops = idx
                    .iter()
                    .enumerate()
                    .map(|(coord, &code)| {
                        let ds = digits(code, q, k as usize + 1);
                        RowOp::Hash { coord, m: ds[..k as usize].to_vec(), b: ds[k as usize] }
                    })
                    .collect();
                out.push(make(ops));
                if !next_word(&mut idx, per_row as u64) {
                    break;
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_partitions() {
        let f = draw_row_operation(RowOpKind::Fold, &RowOpParams::new(4, 2, 2), 9).unwrap();
        let mut all: Vec<usize> = f
            .ops
            .iter()
            .flat_map(|op| match op {
                RowOp::Aggregate { set } => set.clone(),
                _ => panic!(),
            })
            .collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3]);
        assert_eq!(f.replacement, Replacement::Without);
    }

    #[test]
    fn full_puncturing_is_a_permutation() {
        let f = draw_row_operation(RowOpKind::Puncturing, &RowOpParams::new(6, 6, 1), 1).unwrap();
        let mut rows: Vec<usize> = f
            .ops
            .iter()
            .map(|op| match op {
                RowOp::Aggregate { set } => set[0],
                _ => panic!(),
            })
            .collect();
        rows.sort();
        assert_eq!(rows, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn full_weight_xor() {
        let f = draw_row_operation(RowOpKind::Xor, &RowOpParams::new(5, 3, 5), 4).unwrap();
        for op in &f.ops {
            assert_eq!(op, &RowOp::InnerProduct { v: vec![1; 5] });
        }
    }

    #[test]
    fn bad_params() {
        assert!(draw_row_operation(RowOpKind::Fold, &RowOpParams::new(5, 2, 2), 0).is_err());
        assert!(draw_row_operation(RowOpKind::Fold, &RowOpParams::new(4, 1, 2), 0).is_err());
        assert!(draw_row_operation(RowOpKind::Puncturing, &RowOpParams::new(3, 4, 1), 0).is_err());
        assert!(draw_row_operation(RowOpKind::Xor, &RowOpParams::new(4, 2, 2).with_field(4), 0).is_err());
        assert!(draw_row_operation(RowOpKind::HashReduce, &RowOpParams::new(4, 3, 1), 0).is_err());
    }

    #[test]
    fn apply_examples() {
        let c = CodeMatrix::from_codewords(2, [[0u64, 1], [1, 1]]).unwrap();
        let f = RowOpTuple {
            kind: RowOpKind::Sampling,
            seed: 0,
            replacement: Replacement::With,
            n0: 2,
            t: 1,
            q: 2,
            ops: vec![RowOp::Aggregate { set: vec![0] }, RowOp::Aggregate { set: vec![0] }, RowOp::Aggregate { set: vec![1] }],
        };
        let out = apply_row_op(&c, &f).unwrap();
        assert_eq!(out.codeword(0), &[0, 0, 1]);
        assert_eq!(out.codeword(1), &[1, 1, 1]);

        let agg = RowOpTuple { kind: RowOpKind::Aggregate, t: 2, ops: vec![RowOp::Aggregate { set: vec![0, 1] }], ..f.clone() };
        let c = CodeMatrix::from_codewords(2, [[0u64, 0], [1, 1]]).unwrap();
        let out = apply_row_op(&c, &agg).unwrap();
        assert_eq!(out.q(), 4);
        assert_eq!(out.row(0), vec![0, 3]);

        let xor = RowOpTuple { kind: RowOpKind::Xor, t: 1, ops: vec![RowOp::InnerProduct { v: vec![0, 1] }], ..f };
        let c = CodeMatrix::from_codewords(2, [[0u64, 1], [1, 0]]).unwrap();
        assert_eq!(apply_row_op(&c, &xor).unwrap().row(0), c.row(1));
    }

    #[test]
    fn replay_and_json() {
        let p = RowOpParams::new(7, 4, 3).with_field(5);
        let a = draw_row_operation(RowOpKind::Xor, &p, 77).unwrap();
        let b = draw_row_operation(RowOpKind::Xor, &p, 77).unwrap();
        assert_eq!(a, b);
        let back = RowOpTuple::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(a, back);
        assert!(a.to_json().unwrap().contains("\"kind\":\"xor\""));
    }

    #[test]
    fn hash_alphabet_checks() {
        let p = RowOpParams::new(3, 3, 1).with_field(3).with_k(2);
        let f = draw_row_operation(RowOpKind::HashReduce, &p, 5).unwrap();
        let c9 = CodeMatrix::from_codewords(9, [[8u64, 0, 4]]).unwrap();
        assert_eq!(apply_row_op(&c9, &f).unwrap().q(), 3);
        let c8 = CodeMatrix::from_codewords(8, [[7u64, 0, 4]]).unwrap();
        assert!(apply_row_op(&c8, &f).is_err());
    }

    #[test]
    fn enumeration_sizes() {
        let p = RowOpParams::new(3, 2, 1);
        assert_eq!(enumerate_tuples(RowOpKind::Sampling, &p, 1000).unwrap().len(), 9);
        assert_eq!(enumerate_tuples(RowOpKind::Puncturing, &p, 1000).unwrap().len(), 6);
        let p = RowOpParams::new(4, 2, 2);
        assert_eq!(enumerate_tuples(RowOpKind::Fold, &p, 1000).unwrap().len(), 6);
        assert_eq!(enumerate_tuples(RowOpKind::Aggregate, &p, 1000).unwrap().len(), 36);
        let p = RowOpParams::new(3, 1, 2).with_field(3);
        assert_eq!(enumerate_basic_ops(RowOpKind::Xor, &p).unwrap().len(), 12);
    }
}
