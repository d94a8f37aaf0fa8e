use listop_core::codes::agreement;
use listop_core::concat::{
    concat_encode, concat_list_decode, corrupt, default_outer_radius, hadamard_list_decode, ConcatCode,
    CorruptionPattern,
};
use listop_core::constructions::{hadamard_word, random_code, reed_solomon};
use listop_core::codes::DEFAULT_CAP;
use listop_core::derive_seed;
use proptest::prelude::*;

#[test]
fn hadamard_lists_are_small_everywhere() {
    // every received word of length 2^k for k <= 4, sampled beyond that
    for k in 1..=6u32 {
        let len = 1usize << k;
        let words: Box<dyn Iterator<Item = Vec<u64>>> = if k <= 4 {
            Box::new((0..1u64 << len).map(move |w| (0..len).map(|i| (w >> i) & 1).collect()))
        } else {
            let c = random_code(2, len, 2000, k as u64).unwrap();
            Box::new((0..c.len()).map(move |j| c.codeword(j).to_vec()))
        };
        for y in words {
            for eps in [0.125, 0.25, 0.5, 0.75, 1.0] {
                let list = hadamard_list_decode(&y, 0.5 - eps / 2.0).unwrap();
                assert!(list.len() as f64 <= 8.0 / (eps * eps), "k={k} eps={eps}: {}", list.len());
            }
        }
    }
}

proptest! {
    #[test]
    fn uncorrupted_inner_blocks_decode_uniquely(k in 1u32..=6, m in any::<u64>(), eps in 0.05f64..=1.0) {
        let m = m % (1 << k);
        let list = hadamard_list_decode(&hadamard_word(k, m), 0.5 - eps / 2.0).unwrap();
        prop_assert!(list.contains(&m));
    }
}

#[test]
fn agreement_propagates_through_the_inner_decoder() {
    let outer = reed_solomon(7, 2, &[0, 1, 2, 3, 4, 5, 6], DEFAULT_CAP).unwrap();
    let code = ConcatCode::new(outer, 3).unwrap();
    for eps in [0.5f64, 1.0] {
        let need = eps * eps * eps / 8.0;
        let trials = 200;
        let mut good = 0;
        let mut recovered = 0;
        for i in 0..trials {
            let idx = (derive_seed(5, "message", i) % code.outer().len() as u64) as usize;
            let y = corrupt(&code, idx, (0.5 - eps).max(0.0), CorruptionPattern::Concentrated).unwrap();
            let res = concat_list_decode(&code, &y, eps, derive_seed(5, "decode", i), default_outer_radius(eps)).unwrap();
            let agr = agreement(&res.intermediate, code.outer().codeword(idx)).unwrap();
            if agr as f64 >= need * code.outer().n() as f64 {
                good += 1;
            }
            if res.candidates.contains(&idx) {
                recovered += 1;
            }
        }
        assert!(good * 2 >= trials, "eps={eps}: {good}/{trials}");
        assert_eq!(recovered, trials);
    }
}

#[test]
fn encoding_and_corruption_budgets() {
    let outer = reed_solomon(5, 2, &[0, 1, 2, 3, 4], DEFAULT_CAP).unwrap();
    let code = ConcatCode::new(outer, 3).unwrap();
    assert_eq!(code.encoded_len(), 40);
    let x = concat_encode(&code, 7).unwrap();
    for pattern in [CorruptionPattern::Concentrated, CorruptionPattern::Spread] {
        for f in [0.0, 0.1, 0.25, 0.4] {
            let y = corrupt(&code, 7, f, pattern).unwrap();
            let d = x.iter().zip(&y).filter(|(a, b)| a != b).count();
            assert!(d as f64 <= f * 40.0 + 1e-9, "{pattern:?} {f}: {d}");
        }
    }
    assert!(concat_encode(&code, 25).is_err());
    let small = ConcatCode::new(reed_solomon(5, 1, &[0, 1], DEFAULT_CAP).unwrap(), 2);
    assert!(small.is_err());
}
