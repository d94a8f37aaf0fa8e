use listop_core::codes::{hamming_distance, min_list_bound, DEFAULT_CAP};
use listop_core::col_ops::{draw_linear_subcode, draw_subcode, expected_ball_load, SizeSpec};
use listop_core::constructions::{linear_span, random_code, random_generator};
use listop_core::expectation::stats::mean_std;
use listop_core::ratio::{abs_radius, big_to_f64, ratio};
use listop_core::row_ops::Replacement;
use listop_core::derive_seed;
use num_rational::BigRational;
use proptest::prelude::*;

proptest! {
    #[test]
    fn subcode_draw_shape(big_n0 in 1usize..40, count in 1usize..40, seed in any::<u64>(), with in any::<bool>()) {
        let c0 = random_code(3, 5, big_n0, seed).unwrap();
        let rep = if with { Replacement::With } else { Replacement::Without };
        let res = draw_subcode(&c0, SizeSpec::Count(count), rep, seed);
        if !with && count > big_n0 {
            prop_assert!(res.is_err());
            return Ok(());
        }
        let (sub, draw) = res.unwrap();
        prop_assert_eq!(sub.len(), count);
        prop_assert_eq!(draw.indices.len(), count);
        for (j, &i) in draw.indices.iter().enumerate() {
            prop_assert_eq!(sub.codeword(j), c0.codeword(i));
        }
        if !with {
            let mut idx = draw.indices.clone();
            idx.sort_unstable();
            idx.dedup();
            prop_assert_eq!(idx.len(), count);
        }
        // replay
        let (again, _) = draw_subcode(&c0, SizeSpec::Count(count), rep, seed).unwrap();
        prop_assert_eq!(again, sub);
    }

    #[test]
    fn fraction_resolves_with_floor_of_one(big_n0 in 1usize..1000, p in 0.0001f64..2.0) {
        let n = SizeSpec::Fraction(p).resolve(big_n0).unwrap();
        prop_assert!(n >= 1);
        prop_assert!((n as f64 - p * big_n0 as f64).abs() <= 0.5 + 1e-9 || n == 1);
    }
}

#[test]
fn linear_subcodes_match_span_sampling() {
    // messages through the generator versus uniform picks from the full span
    let (q, n, k, size, trials) = (3u64, 8usize, 4usize, 12usize, 400u64);
    let generator = random_generator(q, n, k, 5).unwrap();
    let span = linear_span(&generator, DEFAULT_CAP).unwrap();
    let rho = ratio(1, 4);
    let list_sizes = |via_messages: bool| -> Vec<f64> {
        (0..trials)
            .map(|i| {
                let s = derive_seed(99, if via_messages { "msg" } else { "span" }, i);
                let sub = if via_messages {
                    draw_linear_subcode(&generator, size, s).unwrap()
                } else {
                    draw_subcode(&span, SizeSpec::Count(size), Replacement::With, s).unwrap().0
                };
                min_list_bound(&sub, rho, DEFAULT_CAP).unwrap() as f64
            })
            .collect()
    };
    let (ma, sa) = mean_std(&list_sizes(true));
    let (mb, sb) = mean_std(&list_sizes(false));
    let se = ((sa * sa + sb * sb) / trials as f64).sqrt();
    assert!((ma - mb).abs() <= 4.0 * se.max(1e-9), "means {ma} vs {mb}, se {se}");
}

#[test]
fn ball_load_matches_monte_carlo() {
    let c0 = random_code(2, 8, 64, 3).unwrap();
    let z = vec![0u64; 8];
    let rho = ratio(3, 8);
    let r = abs_radius(rho, 8);
    let count = 32;
    let p = BigRational::new(count.into(), 64.into());
    let expected = big_to_f64(&expected_ball_load(&c0, &z, rho, &p).unwrap());
    let loads: Vec<f64> = (0..4000)
        .map(|i| {
            let (sub, _) = draw_subcode(&c0, SizeSpec::Count(count), Replacement::With, derive_seed(1, "load", i)).unwrap();
            sub.codewords().filter(|c| hamming_distance(c, &z).unwrap() <= r).count() as f64
        })
        .collect();
    let (mean, sd) = mean_std(&loads);
    assert!((mean - expected).abs() <= 4.0 * sd / (loads.len() as f64).sqrt(), "{mean} vs {expected}");
}
