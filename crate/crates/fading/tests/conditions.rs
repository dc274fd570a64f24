use marc_core::{JointPmf, Variable};
use marc_fading::*;
use marc_rates::model::{S1, S2, W, W3};
use marc_rates::SourceSideInfoModel;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(kind: FadingKind, a: [f64; 5], p: [f64; 3]) -> FadingMarcParams {
    FadingMarcParams::new(
        kind,
        Attenuations {
            a11: a[0],
            a21: a[1],
            a31: a[2],
            a13: a[3],
            a23: a[4],
        },
        p,
    )
    .unwrap()
}

fn strong_relay(kind: FadingKind) -> FadingMarcParams {
    params(kind, [1.0, 1.0, 1.0, 2.0, 2.0], [1.0; 3])
}

#[test]
fn phase_strong_relay_configuration() {
    let p = strong_relay(FadingKind::Phase);
    assert_eq!(phase_df_conditions(&p).unwrap(), [true, true, true]);
    let t = phase_region(&p, 1.0).unwrap();
    assert_eq!(t, [3f64.log2(), 3f64.log2(), 2.0]);
    let t2 = phase_region(&p, 2.0).unwrap();
    assert_eq!(t2, t.map(|x| 2.0 * x));
}

#[test]
fn phase_other_cases() {
    let unit = params(FadingKind::Phase, [1.0; 5], [1.0; 3]);
    assert_eq!(phase_df_conditions(&unit).unwrap(), [false, false, false]);
    let silent = params(
        FadingKind::Phase,
        [0.3, 0.8, 5.0, 0.4, 0.9],
        [2.0, 3.0, 0.0],
    );
    assert_eq!(phase_df_conditions(&silent).unwrap(), [true, true, true]);
    let off = params(FadingKind::Phase, [1.0; 5], [0.0; 3]);
    assert_eq!(phase_region(&off, 1.0).unwrap(), [0.0; 3]);
}

#[test]
fn kind_and_parameter_validation() {
    let r = strong_relay(FadingKind::Rayleigh);
    assert!(matches!(
        phase_df_conditions(&r),
        Err(FadingError::WrongKind { .. })
    ));
    assert!(rayleigh_df_conditions(&strong_relay(FadingKind::Phase)).is_err());
    assert!(FadingMarcParams::new(FadingKind::Phase, r.a, [1.0, -1.0, 1.0]).is_err());
    assert!(phase_region(&strong_relay(FadingKind::Phase), 0.0).is_err());
    let dead_relay_link = params(FadingKind::Rayleigh, [1.0, 1.0, 1.0, 0.0, 2.0], [1.0; 3]);
    let err = rayleigh_df_conditions(&dead_relay_link).unwrap_err();
    assert!(err.to_string().contains("a13^2 P1"), "{err}");
}

#[test]
fn params_json_schema() {
    let text = r#"{"kind":"rayleigh","a":{"11":1,"21":1,"31":1,"13":2,"23":2},"P":[1,1,1]}"#;
    let p: FadingMarcParams = serde_json::from_str(text).unwrap();
    assert_eq!(p, strong_relay(FadingKind::Rayleigh));
    let back: FadingMarcParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
}

#[test]
fn rayleigh_weak_direct_links_strong_relay_links() {
    let p = params(
        FadingKind::Rayleigh,
        [0.01, 0.01, 0.01, 10.0, 10.0],
        [1.0; 3],
    );
    assert_eq!(rayleigh_df_conditions(&p).unwrap(), [true, true, true]);
    let b = rayleigh_df_bounds(&p).unwrap();
    let expect = 100.0 / exp_scaled_e1(0.01).unwrap();
    assert!((b[0] - expect).abs() < 1e-9 * expect);
    assert!(b[0] > 1.0003 * 10.0);
}

#[test]
fn rayleigh_vanishing_relay_link_fails() {
    let p = params(FadingKind::Rayleigh, [1.0, 1.0, 0.0, 1e-4, 2.0], [1.0; 3]);
    assert!(!rayleigh_df_conditions(&p).unwrap()[0]);
}

#[test]
fn rayleigh_equal_relay_links_match_the_underlying_expectation() {
    // a13^2 P1 = a23^2 P2 = a: the bound is 1 / f'(a), with
    // f'(a) = E[E / (1 + a E)] for a unit exponential E.
    let a = 4.0;
    let p = params(
        FadingKind::Rayleigh,
        [0.5, 0.5, 0.5, 2.0, 1.0],
        [1.0, 4.0, 1.0],
    );
    let bound = rayleigh_df_bounds(&p).unwrap()[2];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 2_000_000;
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        let e = -u.ln();
        let v = e / (1.0 + a * e);
        s += v;
        s2 += v * v;
    }
    let mean = s / n as f64;
    let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
    assert!(
        (1.0 / bound - mean).abs() < 3.0 * se,
        "{} vs {mean} ± {se}",
        1.0 / bound
    );
    // Nearby unequal links give nearly the same bound.
    let q = params(
        FadingKind::Rayleigh,
        [0.5, 0.5, 0.5, 2.0, 1.0],
        [1.0, 4.0 * (1.0 + 1e-3), 1.0],
    );
    let near = rayleigh_df_bounds(&q).unwrap()[2];
    assert!((near - bound).abs() < 1e-2 * bound);
}

#[test]
fn rayleigh_region_cases() {
    let mc = McConfig {
        samples: 400_000,
        seed: 1,
    };
    let off = params(FadingKind::Rayleigh, [1.0; 5], [0.0; 3]);
    let t = rayleigh_region(&off, 1.0, &mc).unwrap();
    assert_eq!(t.bits, [0.0; 3]);

    let single = params(
        FadingKind::Rayleigh,
        [1.5, 1.0, 1.0, 1.0, 1.0],
        [2.0, 0.0, 0.0],
    );
    let t = rayleigh_region(&single, 1.7, &mc).unwrap();
    let s = 1.5 * 1.5 * 2.0;
    let expect = 1.7 * exp_scaled_e1(1.0 / s).unwrap() / std::f64::consts::LN_2;
    assert!((t.bits[0] - expect).abs() < 1e-12);
    assert!((t.bits[2] - expect).abs() < 1e-12);
    assert_eq!(t.std_error, [0.0; 3]);

    // Fading never helps on average: below the unfaded thresholds.
    let ph = phase_region(&strong_relay(FadingKind::Phase), 1.0).unwrap();
    let ry = rayleigh_region(&strong_relay(FadingKind::Rayleigh), 1.0, &mc).unwrap();
    for i in 0..3 {
        assert!(ry.bits[i] + 3.0 * ry.std_error[i] < ph[i], "{i}");
    }
    assert!(ry.std_error[2] > 0.0 && ry.std_error[0] == 0.0);
}

#[test]
fn separation_verdicts() {
    let p = strong_relay(FadingKind::Phase);
    let mc = McConfig::default();
    let zero = SourceEntropies::new([0.0; 3], [0.0; 3]).unwrap();
    assert_eq!(
        check_separation_optimal(&zero, &p, 1.0, false, &mc)
            .unwrap()
            .verdict,
        SeparationVerdict::Achievable
    );

    let inside = SourceEntropies::new([1.0, 1.0, 1.5], [1.0, 1.0, 1.5]).unwrap();
    let r = check_separation_optimal(&inside, &p, 1.0, false, &mc).unwrap();
    assert_eq!(r.verdict, SeparationVerdict::Achievable);
    assert!(r.mabrc_entropy_conditions_hold.is_none());
    assert!(!inside.is_realizable(1e-9));

    let too_much = SourceEntropies::new([1.0, 1.0, 2.1], [0.0; 3]).unwrap();
    let r = check_separation_optimal(&too_much, &p, 1.0, false, &mc).unwrap();
    assert_eq!(r.verdict, SeparationVerdict::NotAchievable);

    let edge = SourceEntropies::new([0.5, 0.5, 2.0], [0.0; 3]).unwrap();
    let r = check_separation_optimal(&edge, &p, 1.0, false, &mc).unwrap();
    assert_eq!(r.verdict, SeparationVerdict::Boundary);

    // Relay-decoding conditions fail: only the converse can be asserted.
    let weak = params(FadingKind::Phase, [1.0; 5], [1.0; 3]);
    let r = check_separation_optimal(&zero, &weak, 1.0, false, &mc).unwrap();
    assert!(!r.df_conditions_hold);
    assert_eq!(r.verdict, SeparationVerdict::Boundary);

    // Broadcast variant: the relay must have no worse side information.
    let worse_relay = SourceEntropies::new([0.5, 0.5, 1.0], [0.9, 0.5, 1.4]).unwrap();
    let r = check_separation_optimal(&worse_relay, &p, 1.0, true, &mc).unwrap();
    assert_eq!(r.mabrc_entropy_conditions_hold, Some(false));
    assert_eq!(r.verdict, SeparationVerdict::Boundary);
    let r = check_separation_optimal(&worse_relay, &p, 1.0, false, &mc).unwrap();
    assert_eq!(r.verdict, SeparationVerdict::Achievable);
}

#[test]
fn phase_thresholds_are_deterministic() {
    let p = params(
        FadingKind::Phase,
        [0.3, 0.7, 1.1, 2.0, 2.5],
        [1.3, 0.4, 2.2],
    );
    let e = SourceEntropies::new([0.2, 0.3, 0.6], [0.1, 0.1, 0.2]).unwrap();
    let mc = McConfig::default();
    let a = check_separation_optimal(&e, &p, 1.0, true, &mc).unwrap();
    let b = check_separation_optimal(&e, &p, 1.0, true, &mc).unwrap();
    assert_eq!(a, b);
}

fn random_model(rng: &mut ChaCha8Rng) -> SourceSideInfoModel {
    let vars = vec![
        Variable::new(S1, 2),
        Variable::new(S2, 3),
        Variable::new(W, 2),
        Variable::new(W3, 2),
    ];
    let w: Vec<f64> = (0..24).map(|_| rng.random::<f64>()).collect();
    SourceSideInfoModel::new(JointPmf::normalized(vars, w).unwrap()).unwrap()
}

#[test]
fn entropies_from_models_are_realizable() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let m = random_model(&mut rng);
        let e = SourceEntropies::from_model(&m);
        assert!(e.is_realizable(1e-9));
        assert!((e.h12_given_w - m.h(&[S1, S2], &[W])).abs() < 1e-15);
    }
}

proptest! {
    #[test]
    fn phase_thresholds_are_monotone(
        a in proptest::array::uniform5(0.0f64..3.0),
        p in proptest::array::uniform3(0.0f64..3.0),
        which in 0usize..8,
        bump in 0.0f64..2.0,
    ) {
        let base = params(FadingKind::Phase, a, p);
        let (mut a2, mut p2) = (a, p);
        if which < 5 { a2[which] += bump } else { p2[which - 5] += bump }
        let bigger = params(FadingKind::Phase, a2, p2);
        let (t0, t1) = (phase_region(&base, 1.0).unwrap(), phase_region(&bigger, 1.0).unwrap());
        for i in 0..3 {
            prop_assert!(t1[i] >= t0[i]);
        }
    }

    #[test]
    fn achievable_verdicts_pass_the_entropy_comparisons(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng);
        let e = SourceEntropies::from_model(&m);
        let a: [f64; 5] = std::array::from_fn(|_| rng.random_range(0.0..2.0));
        let p = params(FadingKind::Phase, a, [1.0; 3]);
        let kappa = rng.random_range(0.3..3.0);
        let r = check_separation_optimal(&e, &p, kappa, false, &McConfig::default()).unwrap();
        if r.verdict == SeparationVerdict::Achievable {
            for c in &r.conditions {
                prop_assert!(c.lhs_bits <= 1e-12 || c.lhs_bits < c.rhs_bits - 1e-9);
            }
        }
        if r.verdict == SeparationVerdict::NotAchievable {
            prop_assert!(r.conditions.iter().any(|c| c.lhs_bits > c.rhs_bits));
        }
    }
}

#[test]
fn achievable_verdicts_agree_with_the_discrete_checker() {
    use marc_rates::{check_thm1, DmChannel, SeparationInput};
    // Destination sees (X1, X2, X3) through an erasure-free pipe; the relay
    // sees (X1, X2), so the relay-side comparisons are the discrete
    // counterpart of the relay-decoding conditions.
    let ch = DmChannel::deterministic([2, 3, 2], 12, 6, |[a, b, c]| {
        ((a * 3 + b) * 2 + c, a * 3 + b)
    })
    .unwrap();
    let input = SeparationInput::independent(&[0.5, 0.5], &[1.0 / 3.0; 3], &[0.5, 0.5]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut achievable = 0;
    for _ in 0..200 {
        let m = random_model(&mut rng);
        let kappa = rng.random_range(0.2..2.0);
        let rep = check_thm1(&m, &ch, &input, kappa).unwrap();
        let dst =
            ["thm1.dst.S1", "thm1.dst.S2", "thm1.dst.S1S2"].map(|l| rep.get(l).unwrap().clone());
        let e = SourceEntropies::from_model(&m);
        let (conds, _, verdict) = classify(&e, dst.clone().map(|c| c.rhs_bits), [true; 3], false);
        for (c, d) in conds.iter().zip(&dst) {
            assert!((c.lhs_bits - d.lhs_bits).abs() < 1e-12);
        }
        if verdict == SeparationVerdict::Achievable {
            achievable += 1;
            assert!(dst.iter().all(|d| d.satisfied));
        }
    }
    assert!(achievable > 10);
}
