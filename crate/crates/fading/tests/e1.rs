use marc_fading::{exp_integral_e1, exp_scaled_e1};
use proptest::prelude::*;

fn reference() -> Vec<(f64, f64)> {
    include_str!("data/e1_reference.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

#[test]
fn matches_high_precision_table_on_log_spaced_points() {
    let table = reference();
    assert_eq!(table.len(), 1000);
    assert_eq!(table[0].0, 1e-6);
    assert_eq!(table[999].0, 700.0);
    let worst = table
        .iter()
        .map(|&(x, v)| ((exp_integral_e1(x).unwrap() - v) / v).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-10, "worst relative error {worst:e}");
}

/// `E1(x) = ∫_0^1 e^{-x/t} / t dt`, by composite Simpson on a graded mesh
/// that concentrates nodes where the integrand rises.
fn quadrature(x: f64) -> f64 {
    let n = 200_000;
    let g = |s: f64| {
        // t = s^2 so that dt = 2 s ds.
        let t = s * s;
        if t == 0.0 {
            0.0
        } else {
            (-x / t).exp() / t * 2.0 * s
        }
    };
    let h = 1.0 / n as f64;
    let mut acc = g(0.0) + g(1.0);
    for i in 1..n {
        acc += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn agrees_with_direct_quadrature() {
    for x in [0.05, 0.3, 1.0, 2.5, 7.0] {
        let q = quadrature(x);
        let e = exp_integral_e1(x).unwrap();
        assert!(((e - q) / q).abs() < 1e-8, "x = {x}: {e} vs {q}");
    }
}

#[test]
fn reference_points() {
    assert!((exp_integral_e1(1.0).unwrap() - 0.219_383_934_395_52).abs() < 1e-10);
    let e10 = exp_integral_e1(10.0).unwrap();
    assert!((e10 - 4.156_968_929_685_324e-6).abs() / 4.156_968_929_685_324e-6 < 1e-10);
    assert!((exp_integral_e1(0.001).unwrap() - 6.331_539_364_136_15).abs() < 1e-5);
}

#[test]
fn rejects_non_positive_arguments() {
    for x in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(exp_integral_e1(x).is_err());
        assert!(exp_scaled_e1(x).is_err());
    }
}

#[test]
fn continuous_across_the_algorithm_switch() {
    let below = exp_integral_e1(1.0).unwrap();
    let above = exp_integral_e1(1.0 + 1e-12).unwrap();
    assert!((below - above).abs() < 1e-11);
}

proptest! {
    #[test]
    fn stays_inside_the_classical_bracket(lx in -6.0f64..2.8) {
        let x = 10f64.powf(lx);
        let e = exp_integral_e1(x).unwrap();
        let lower = 0.5 * (-x).exp() * (1.0 + 2.0 / x).ln();
        let upper = (-x).exp() * (1.0 + 1.0 / x).ln();
        prop_assert!(lower < e && e < upper, "x = {x}: {lower} < {e} < {upper}");
    }

    #[test]
    fn scaled_form_is_consistent(lx in -6.0f64..2.8) {
        let x = 10f64.powf(lx);
        let s = exp_scaled_e1(x).unwrap();
        let e = exp_integral_e1(x).unwrap();
        prop_assert!(((s * (-x).exp() - e) / e).abs() < 1e-12);
    }
}
