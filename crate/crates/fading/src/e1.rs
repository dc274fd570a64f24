//! The exponential integral `E1(x) = ∫_x^∞ e^{-q}/q dq`.

use crate::error::{FadingError, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;
const TINY: f64 = 1e-300;

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(FadingError::Domain(format!(
            "E1 needs a finite positive argument, got {x}"
        )))
    }
}

/// Power series `-γ - ln x + Σ (-1)^{k+1} x^k / (k k!)`, for `x <= 1`.
fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut fact_term = 1.0; // (-1)^{k+1} x^k / k!
    for k in 1..MAX_TERMS {
        fact_term *= if k == 1 { x } else { -x / k as f64 };
        let term = fact_term / k as f64;
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

/// Continued fraction for `e^x E1(x)` evaluated with the modified Lentz
/// method, for `x > 1`.
fn scaled_continued_fraction(x: f64) -> f64 {
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `E1(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= 1.0 {
        series(x)
    } else {
        scaled_continued_fraction(x) * (-x).exp()
    })
}

/// `e^x E1(x)` for `x > 0`, accurate where `E1` alone would underflow.
pub fn exp_scaled_e1(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= 1.0 {
        series(x) * x.exp()
    } else {
        scaled_continued_fraction(x)
    })
}
