use listop_core::codes::{hamming_distance, min_abs_distance, DEFAULT_CAP};
use listop_core::constructions::{
    build_cluster_code, cluster_capture_trial, hadamard, linear_span, random_generator, random_linear_code,
    reed_solomon, weight_distribution,
};
use listop_core::field::PrimeField;
use listop_core::ratio::ratio;
use listop_core::derive_seed;
use proptest::prelude::*;
use std::collections::HashSet;

#[test]
fn reed_solomon_is_mds() {
    for q in [2u64, 3, 5, 7] {
        for k in 1..=3usize {
            for n in k.max(2)..=q as usize {
                let points: Vec<u64> = (0..n as u64).collect();
                let code = reed_solomon(q, k, &points, DEFAULT_CAP).unwrap();
                assert_eq!(code.len(), q.pow(k as u32) as usize);
                assert_eq!(min_abs_distance(&code).unwrap(), n - k + 1, "q={q} k={k} n={n}");
            }
        }
    }
}

#[test]
fn hadamard_codewords_are_balanced() {
    for k in 1..=6u32 {
        let h = hadamard(k).unwrap();
        assert_eq!(h.len(), 1 << k);
        let half = 1usize << (k - 1);
        assert_eq!(min_abs_distance(&h).unwrap(), half);
        let wd = weight_distribution(&h);
        assert_eq!(wd.histogram.get(&0), Some(&1));
        assert_eq!(wd.histogram.get(&half), Some(&((1u64 << k) - 1)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn span_is_closed_under_addition(q in prop::sample::select(vec![2u64, 3, 5]), n in 1usize..7, k in 1usize..4, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let code = random_linear_code(q, n, k, seed, DEFAULT_CAP).unwrap();
        prop_assert_eq!(code.len(), q.pow(k as u32) as usize);
        let f = PrimeField::new(q).unwrap();
        let words: HashSet<Vec<u64>> = code.codewords().map(|c| c.to_vec()).collect();
        for a in code.codewords() {
            for b in code.codewords().take(8) {
                let s: Vec<u64> = a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect();
                prop_assert!(words.contains(&s));
            }
        }
    }

    // Zero appears once per zero codeword, counting the multiset.
    #[test]
    fn zero_weight_counts_zero_words(q in prop::sample::select(vec![2u64, 3]), n in 1usize..6, k in 1usize..4, seed in any::<u64>()) {
        let generator = random_generator(q, n, k, seed).unwrap();
        let code = linear_span(&generator, DEFAULT_CAP).unwrap();
        let zeros = code.codewords().filter(|c| c.iter().all(|&s| s == 0)).count() as u64;
        let wd = weight_distribution(&code);
        prop_assert_eq!(wd.histogram.get(&0).copied().unwrap_or(0), zeros);
        prop_assert_eq!(wd.histogram.values().sum::<u64>(), code.len() as u64);
        // a linear map has q^(k - rank) preimages of zero
        prop_assert!(zeros >= 1 && (code.len() as u64).is_multiple_of(zeros));
    }
}

#[test]
fn cluster_code_structure() {
    let cc = build_cluster_code(ratio(1, 4), 128, 2, 9).unwrap();
    let s = cc.params.cluster_size;
    assert_eq!(cc.c0.len(), cc.centers.len() * s);
    assert!(min_abs_distance(&cc.centers).unwrap() >= 3);
    for z in 0..cc.centers.len() {
        for col in cc.cluster(z) {
            assert_eq!(cc.cluster_of[col], z);
            assert_eq!(hamming_distance(cc.c0.codeword(col), cc.centers.codeword(z)).unwrap(), 1);
        }
    }
    // replay
    let again = build_cluster_code(ratio(1, 4), 128, 2, 9).unwrap();
    assert_eq!(again.c0, cc.c0);
}

#[test]
fn captured_clusters_certify_their_size() {
    let cc = build_cluster_code(ratio(1, 4), 64, 2, 3).unwrap();
    let mut captured = 0;
    for i in 0..50 {
        let out = cluster_capture_trial(&cc, 1.0 / 32.0, derive_seed(3, "capture", i)).unwrap();
        assert!(out.target >= 1 && out.target <= cc.params.cluster_size);
        if out.captured() {
            captured += 1;
            assert!(out.certified_list_size >= out.target);
        } else {
            assert_eq!(out.certified_list_size, 0);
        }
    }
    assert!(captured > 0);
}
