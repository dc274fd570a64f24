//! Ergodic rates `E[log2(1 + Σ a_i E_i)]` with `E_i` iid unit exponentials,
//! the squared magnitude of a unit complex Gaussian.

use marc_core::derive_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::e1::exp_scaled_e1;
use crate::error::{FadingError, Result};
use crate::stats::RunningStats;

/// Samples per Monte Carlo chunk. Each chunk has its own derived seed, so
/// results do not depend on how chunks are scheduled.
pub const MC_CHUNK: usize = 1 << 16;
const MC_STREAM: u64 = 0xE1;
/// Relative scale difference below which two scales are treated as equal.
const EQUAL_SCALES: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub bits: f64,
    /// Zero for closed forms.
    pub std_error: f64,
    pub method: Method,
}

impl Expectation {
    fn exact(bits: f64) -> Self {
        Expectation {
            bits,
            std_error: 0.0,
            method: Method::Exact,
        }
    }
}

/// `E[ln(1 + a E)] = e^{1/a} E1(1/a)` in nats.
pub fn mean_ln_one_scale(a: f64) -> Result<f64> {
    exp_scaled_e1(1.0 / a)
}

/// `E[ln(1 + a G)]` in nats for `G ~ Gamma(2, 1)`, the sum of two unit
/// exponentials: integrating by parts gives `1 + f - f/a` with
/// `f = E[ln(1 + a E)]`.
pub fn mean_ln_gamma2(a: f64) -> Result<f64> {
    let f = mean_ln_one_scale(a)?;
    Ok(1.0 + f - f / a)
}

fn check_scales(scales: &[f64]) -> Result<()> {
    if scales.is_empty() {
        return Err(FadingError::Domain("at least one scale is required".into()));
    }
    if let Some(s) = scales.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
        return Err(FadingError::Domain(format!(
            "scales must be finite and positive, got {s}"
        )));
    }
    Ok(())
}

/// `E[log2(1 + Σ_i scales[i] E_i)]`.
///
/// One or two scales use closed forms. Two scales within a relative
/// `1e-5` of each other use the equal-scale limit at their midpoint, where
/// the difference quotient loses precision; the symmetric choice keeps the
/// error second order in the gap. Three or more scales fall back to
/// [`monte_carlo_log2_capacity`].
pub fn expected_log2_capacity(scales: &[f64], mc: &McConfig) -> Result<Expectation> {
    check_scales(scales)?;
    let ln2 = std::f64::consts::LN_2;
    match *scales {
        [a] => Ok(Expectation::exact(mean_ln_one_scale(a)? / ln2)),
        [a, b] if (a - b).abs() <= EQUAL_SCALES * a.max(b) => {
            Ok(Expectation::exact(mean_ln_gamma2(0.5 * (a + b))? / ln2))
        }
        [a, b] => {
            let v = (a * mean_ln_one_scale(a)? - b * mean_ln_one_scale(b)?) / (a - b);
            Ok(Expectation::exact(v / ln2))
        }
        _ => monte_carlo_log2_capacity(scales, mc),
    }
}

fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Monte Carlo estimate with antithetic exponentials `-ln U` and
/// `-ln(1 - U)`; the standard error is over antithetic pair means.
pub fn monte_carlo_log2_capacity(scales: &[f64], mc: &McConfig) -> Result<Expectation> {
    check_scales(scales)?;
    if mc.samples < 2 {
        return Err(FadingError::Domain(
            "Monte Carlo needs at least two samples".into(),
        ));
    }
    let pairs = mc.samples / 2;
    let per_chunk = MC_CHUNK / 2;
    let chunks = pairs.div_ceil(per_chunk);
    let parts: Vec<RunningStats> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(mc.seed, MC_STREAM, c as u64));
            let mut st = RunningStats::default();
            let n = per_chunk.min(pairs - c * per_chunk);
            for _ in 0..n {
                let (mut s, mut t) = (0.0, 0.0);
                for &a in scales {
                    let u = open_unit(&mut rng);
                    s += a * -u.ln();
                    t += a * -(-u).ln_1p();
                }
                st.push(0.5 * (s.ln_1p() + t.ln_1p()) / std::f64::consts::LN_2);
            }
            st
        })
        .collect();
    let mut total = RunningStats::default();
    for p in &parts {
        total.merge(p);
    }
    Ok(Expectation {
        bits: total.mean,
        std_error: total.std_error(),
        method: Method::MonteCarlo,
    })
}
