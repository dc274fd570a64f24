use marc_fading::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mc(samples: usize, seed: u64) -> McConfig {
    McConfig { samples, seed }
}

#[test]
fn unit_scale_value() {
    let e = expected_log2_capacity(&[1.0], &McConfig::default()).unwrap();
    assert_eq!(e.method, Method::Exact);
    let closed = std::f64::consts::E * exp_integral_e1(1.0).unwrap() / std::f64::consts::LN_2;
    assert!((e.bits - closed).abs() < 1e-14);
    assert!((e.bits - 0.86034).abs() < 1e-4);
    let m = monte_carlo_log2_capacity(&[1.0], &mc(2_000_000, 1)).unwrap();
    assert!((m.bits - e.bits).abs() < 3.0 * m.std_error, "{m:?}");
}

#[test]
fn vanishing_scale_gives_vanishing_rate() {
    let e = expected_log2_capacity(&[1e-9], &McConfig::default()).unwrap();
    assert!(e.bits > 0.0 && e.bits < 2e-9);
    assert!(expected_log2_capacity(&[0.0], &McConfig::default()).is_err());
    assert!(expected_log2_capacity(&[], &McConfig::default()).is_err());
    assert!(expected_log2_capacity(&[-1.0, 2.0], &McConfig::default()).is_err());
}

#[test]
fn two_scale_formula_against_monte_carlo() {
    let e = expected_log2_capacity(&[2.0, 0.5], &McConfig::default()).unwrap();
    assert_eq!(e.method, Method::Exact);
    let m = monte_carlo_log2_capacity(&[2.0, 0.5], &mc(4_000_000, 2)).unwrap();
    assert!(
        (m.bits - e.bits).abs() < 3.0 * m.std_error,
        "{} vs {m:?}",
        e.bits
    );
}

#[test]
fn equal_scales_use_the_gamma_limit() {
    for a in [0.05, 1.0, 7.0, 300.0] {
        let eq = expected_log2_capacity(&[a, a], &McConfig::default())
            .unwrap()
            .bits;
        let m = monte_carlo_log2_capacity(&[a, a], &mc(2_000_000, 3)).unwrap();
        assert!((m.bits - eq).abs() < 3.0 * m.std_error + 1e-12, "a = {a}");
        // Continuity across the switch between the limit and the quotient.
        for rel in [1e-5 * 0.99, 1e-5 * 1.01, 1e-4, 1e-3] {
            let near = expected_log2_capacity(&[a, a * (1.0 + rel)], &McConfig::default())
                .unwrap()
                .bits;
            assert!(
                (near - eq).abs() <= 2.0 * rel * eq + 1e-9,
                "a = {a}, rel = {rel}"
            );
        }
    }
}

#[test]
fn three_scales_fall_back_to_monte_carlo() {
    let e = expected_log2_capacity(&[1.0, 2.0, 3.0], &mc(200_000, 4)).unwrap();
    assert_eq!(e.method, Method::MonteCarlo);
    assert!(e.std_error > 0.0);
    let again = expected_log2_capacity(&[1.0, 2.0, 3.0], &mc(200_000, 4)).unwrap();
    assert_eq!(e, again);
    let other = expected_log2_capacity(&[1.0, 2.0, 3.0], &mc(200_000, 5)).unwrap();
    assert_ne!(e.bits, other.bits);
}

#[test]
fn monte_carlo_does_not_depend_on_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                monte_carlo_log2_capacity(&[0.7, 1.3, 4.0], &mc(3 * MC_CHUNK + 123, 9)).unwrap()
            })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn random_scale_sets_agree_with_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..10 {
        let k = 1 + (i % 2);
        let scales: Vec<f64> = (0..k)
            .map(|_| 10f64.powf(rng.random_range(-1.5..2.0)))
            .collect();
        let exact = expected_log2_capacity(&scales, &McConfig::default()).unwrap();
        let m = monte_carlo_log2_capacity(&scales, &mc(1_000_000, 100 + i as u64)).unwrap();
        assert!(
            (m.bits - exact.bits).abs() < 3.0 * m.std_error,
            "{scales:?}"
        );
    }
}

#[test]
fn running_stats_merge_matches_a_single_pass() {
    let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
    let mut whole = RunningStats::default();
    xs.iter().for_each(|x| whole.push(*x));
    let mut parts = RunningStats::default();
    for chunk in xs.chunks(77) {
        let mut c = RunningStats::default();
        chunk.iter().for_each(|x| c.push(*x));
        parts.merge(&c);
    }
    assert_eq!(whole.count, parts.count);
    assert!((whole.mean - parts.mean).abs() < 1e-12);
    assert!((whole.variance() - parts.variance()).abs() < 1e-9);
    let mut constant = RunningStats::default();
    for _ in 0..10 {
        let mut c = RunningStats::default();
        (0..7).for_each(|_| c.push(0.3));
        constant.merge(&c);
    }
    assert_eq!(constant.mean, 0.3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_forms_are_increasing_and_below_jensen(a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
        let one = expected_log2_capacity(&[a], &McConfig::default()).unwrap().bits;
        let two = expected_log2_capacity(&[a, b], &McConfig::default()).unwrap().bits;
        prop_assert!(two > one);
        prop_assert!(one <= (1.0 + a).log2());
        prop_assert!(two <= (1.0 + a + b).log2() + 1e-12);
        let sym = expected_log2_capacity(&[b, a], &McConfig::default()).unwrap().bits;
        prop_assert!((two - sym).abs() < 1e-12 * two.max(1.0));
    }
}
