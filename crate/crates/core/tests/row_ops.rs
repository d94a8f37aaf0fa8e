use std::collections::HashMap;

use listop_core::codes::hamming_distance;
use listop_core::combin::for_each_subset;
use listop_core::constructions::random_code;
use listop_core::row_ops::{
    apply_row_op, draw_row_operation, enumerate_basic_ops, expected_pairwise_distance, xor_parity_probability, RowOp,
};
use listop_core::{derive_seed, CodeMatrix, RowOpKind, RowOpParams, RowOpTuple};
use num_rational::BigRational;
use proptest::prelude::*;
use rayon::prelude::*;

const DRAWS: u64 = 100_000;

/// Every count within 4 standard deviations of `draws / cells`.
fn assert_uniform(counts: &HashMap<RowOp, u64>, cells: usize, draws: u64, what: &str) {
    assert_eq!(counts.len(), cells, "{what}: some op never drawn or an op outside the support");
    let p = 1.0 / cells as f64;
    let mean = draws as f64 * p;
    let sd = (draws as f64 * p * (1.0 - p)).sqrt();
    for (op, &c) in counts {
        assert!((c as f64 - mean).abs() <= 4.0 * sd, "{what}: {op:?} drawn {c} times, expected {mean:.1} +- {sd:.1}");
    }
}

fn first_row_counts(kind: RowOpKind, p: &RowOpParams, label: &str) -> HashMap<RowOp, u64> {
    let ops: Vec<RowOp> = (0..DRAWS)
        .into_par_iter()
        .map(|i| draw_row_operation(kind, p, derive_seed(7, label, i)).unwrap().ops[0].clone())
        .collect();
    let mut counts = HashMap::new();
    for op in ops {
        *counts.entry(op).or_insert(0) += 1;
    }
    counts
}

#[test]
fn basic_ops_are_uniform() {
    for n0 in 1..=5 {
        for t in 1..=3.min(n0) {
            for (kind, q) in [(RowOpKind::Sampling, 2), (RowOpKind::Aggregate, 2), (RowOpKind::Xor, 2), (RowOpKind::Xor, 3)] {
                let p = RowOpParams::new(n0, 2, t).with_field(q);
                let support = enumerate_basic_ops(kind, &p).unwrap();
                let counts = first_row_counts(kind, &p, "uniform");
                assert!(counts.keys().all(|op| support.contains(op)));
                assert_uniform(&counts, support.len(), DRAWS, &format!("{kind:?} n0={n0} t={t} q={q}"));
            }
        }
    }
}

#[test]
fn fold_rows_are_aggregate_marginals() {
    // one fold row is a uniform t-subset, the same law as one aggregation row
    for (n0, t) in [(4, 2), (6, 2), (6, 3), (5, 5)] {
        let fold = RowOpParams::new(n0, n0 / t, t);
        let counts = first_row_counts(RowOpKind::Fold, &fold, "fold-marginal");
        let support = enumerate_basic_ops(RowOpKind::Aggregate, &RowOpParams::new(n0, 1, t)).unwrap();
        assert!(counts.keys().all(|op| support.contains(op)));
        assert_uniform(&counts, support.len(), DRAWS, &format!("fold n0={n0} t={t}"));
        // while its rows partition the coordinates
        for s in 0..200 {
            let f = draw_row_operation(RowOpKind::Fold, &fold, s).unwrap();
            let mut seen: Vec<usize> = f
                .ops
                .iter()
                .flat_map(|op| match op {
                    RowOp::Aggregate { set } => set.clone(),
                    other => panic!("unexpected {other:?}"),
                })
                .collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..n0).collect::<Vec<_>>());
        }
    }
}

#[test]
fn puncturing_rows_are_distinct_and_uniform() {
    let p = RowOpParams::new(5, 3, 1);
    let counts = first_row_counts(RowOpKind::Puncturing, &p, "punct");
    assert_uniform(&counts, 5, DRAWS, "puncturing");
    for s in 0..200 {
        let f = draw_row_operation(RowOpKind::Puncturing, &p, s).unwrap();
        let mut coords: Vec<_> = f.ops.iter().map(|op| format!("{op:?}")).collect();
        coords.sort();
        coords.dedup();
        assert_eq!(coords.len(), 3);
    }
}

#[test]
fn xor_parity_matches_enumeration() {
    for n0 in 1..=12usize {
        for w in 0..=n0 {
            for t in 1..=n0 {
                // a fixed weight-w word: ones in the first w coordinates
                let mut odd = 0u64;
                let mut total = 0u64;
                for_each_subset(n0, t, |s| {
                    total += 1;
                    odd += (s.iter().filter(|&&i| i < w).count() % 2) as u64;
                });
                let exact = BigRational::new(odd.into(), total.into());
                assert_eq!(xor_parity_probability(n0, w, t).unwrap(), exact, "n0={n0} w={w} t={t}");
            }
        }
    }
}

#[test]
fn hash_family_is_pairwise_independent() {
    // all (m, b) for q <= 3, k <= 2: distinct symbols collide with probability exactly 1/q
    for q in 2u64..=3 {
        for k in 1u32..=2 {
            let size = q.pow(k);
            let mut hashes = Vec::new();
            let mut m = vec![0u64; k as usize];
            loop {
                for b in 0..q {
                    hashes.push((m.clone(), b));
                }
                if !listop_core::combin::next_word(&mut m, q) {
                    break;
                }
            }
            let eval = |m: &[u64], b: u64, x: u64| {
                let ds = listop_core::field::digits(x, q, k as usize);
                (m.iter().zip(&ds).map(|(a, d)| a * d).sum::<u64>() + b) % q
            };
            for x in 0..size {
                for y in x + 1..size {
                    let coll = hashes.iter().filter(|(m, b)| eval(m, *b, x) == eval(m, *b, y)).count();
                    assert_eq!(coll as u64 * q, hashes.len() as u64, "q={q} k={k} x={x} y={y}");
                }
            }
            // and the drawn operation agrees with the formula
            let code = CodeMatrix::from_flat(listop_core::Alphabet::new(size).unwrap(), 1, (0..size).collect()).unwrap();
            let p = RowOpParams::new(1, 1, 1).with_field(q).with_k(k);
            for s in 0..20 {
                let f = draw_row_operation(RowOpKind::HashReduce, &p, s).unwrap();
                let RowOp::Hash { m, b, .. } = &f.ops[0] else { panic!("not a hash") };
                let img = apply_row_op(&code, &f).unwrap();
                for x in 0..size {
                    assert_eq!(img.symbol(0, x as usize), eval(m, *b, x));
                }
            }
        }
    }
}

#[test]
fn monte_carlo_pairwise_distance() {
    let cases = [
        (RowOpKind::Sampling, RowOpParams::new(12, 6, 1), 2u64),
        (RowOpKind::Puncturing, RowOpParams::new(12, 6, 1), 2),
        (RowOpKind::Xor, RowOpParams::new(16, 8, 3), 2),
        (RowOpKind::Xor, RowOpParams::new(10, 8, 2).with_field(3), 3),
        (RowOpKind::Aggregate, RowOpParams::new(12, 4, 3), 2),
        (RowOpKind::Fold, RowOpParams::new(12, 4, 3), 2),
    ];
    for (kind, p, q) in cases {
        let c0 = random_code(q, p.n0, 6, 11).unwrap();
        let expected = expected_pairwise_distance(&c0, kind, &p).unwrap().as_f64().1;
        let samples: Vec<f64> = (0..10_000u64)
            .into_par_iter()
            .map(|i| {
                let img = apply_row_op(&c0, &draw_row_operation(kind, &p, derive_seed(3, "pd", i)).unwrap()).unwrap();
                let mut sum = 0.0;
                let mut pairs = 0;
                for a in 0..c0.len() {
                    for b in a + 1..c0.len() {
                        if c0.codeword(a) != c0.codeword(b) {
                            sum += hamming_distance(img.codeword(a), img.codeword(b)).unwrap() as f64 / p.n as f64;
                            pairs += 1;
                        }
                    }
                }
                sum / pairs as f64
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
        let se = (var / samples.len() as f64).sqrt();
        assert!((mean - expected).abs() <= 4.0 * se.max(1e-12), "{kind:?}: mc {mean} vs exact {expected} (se {se})");
    }
}

proptest! {
    #[test]
    fn replay_is_exact(seed in any::<u64>(), kind_ix in 0usize..5) {
        let kinds = [RowOpKind::Sampling, RowOpKind::Puncturing, RowOpKind::Xor, RowOpKind::Aggregate, RowOpKind::Fold];
        let kind = kinds[kind_ix];
        let p = RowOpParams::new(8, 4, 2);
        let c0 = random_code(2, 8, 10, seed ^ 1).unwrap();
        let f = draw_row_operation(kind, &p, seed).unwrap();
        let g = RowOpTuple::from_json(&f.to_json().unwrap()).unwrap();
        prop_assert_eq!(&f, &g);
        prop_assert_eq!(f.clone(), draw_row_operation(kind, &p, seed).unwrap());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let img = apply_row_op(&c0, &f).unwrap();
        let img2 = pool.install(|| apply_row_op(&c0, &g).unwrap());
        prop_assert!(img == img2);
        prop_assert_eq!(img.n(), 4);
        prop_assert_eq!(img.len(), c0.len());
    }
}
