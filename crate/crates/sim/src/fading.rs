//! The Gaussian MARC with phase or Rayleigh fading, as a sample generator.
//! No decoding happens here; frames serve to check channel statistics and
//! ergodic rates.

use marc_core::derive_seed;
use marc_fading::{FadingKind, FadingMarcParams, RunningStats, Thresholds, MC_CHUNK};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Result, SimError};

const STREAM_FRAME: u64 = 0xFADE;
const STREAM_ERGODIC: u64 = 0xE6;

/// One frame of the fading MARC.
///
/// The destination knows `h11, h21, h31` and the relay knows `h13, h23`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMarcFrame {
    pub kind: FadingKind,
    pub h11: Vec<Complex64>,
    pub h21: Vec<Complex64>,
    pub h31: Vec<Complex64>,
    pub h13: Vec<Complex64>,
    pub h23: Vec<Complex64>,
    pub z: Vec<Complex64>,
    pub z3: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub y3: Vec<Complex64>,
}

impl GaussianMarcFrame {
    pub fn destination_csi(&self) -> [&[Complex64]; 3] {
        [&self.h11, &self.h21, &self.h31]
    }

    pub fn relay_csi(&self) -> [&[Complex64]; 2] {
        [&self.h13, &self.h23]
    }
}

/// A draw from `CN(0, 1)`.
fn unit_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn coefficient<R: Rng + ?Sized>(kind: FadingKind, a: f64, rng: &mut R) -> Complex64 {
    match kind {
        FadingKind::Phase => Complex64::from_polar(a, rng.random_range(0.0..std::f64::consts::TAU)),
        FadingKind::Rayleigh => unit_complex_gaussian(rng) * a,
    }
}

/// Passes three input sequences through the channel
/// `Y = H11 X1 + H21 X2 + H31 X3 + Z`, `Y3 = H13 X1 + H23 X2 + Z3` with
/// fresh fading and unit-variance noise at every symbol.
///
/// The average power of input `i` over the frame must not exceed `P_i`.
pub fn simulate_fading_frame(
    p: &FadingMarcParams,
    inputs: &[Vec<Complex64>; 3],
    seed: u64,
) -> Result<GaussianMarcFrame> {
    p.validate()?;
    let n = inputs[0].len();
    if inputs.iter().any(|x| x.len() != n) {
        return Err(SimError::InvalidConfig(
            "input sequences differ in length".into(),
        ));
    }
    for (i, x) in inputs.iter().enumerate() {
        if n == 0 {
            break;
        }
        let power = x.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        if power > p.p[i] * (1.0 + 1e-9) + 1e-12 {
            return Err(SimError::Power {
                input: i + 1,
                power,
                limit: p.p[i],
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_FRAME, 0));
    let a = p.a;
    let mut f = GaussianMarcFrame {
        kind: p.kind,
        h11: Vec::with_capacity(n),
        h21: Vec::with_capacity(n),
        h31: Vec::with_capacity(n),
        h13: Vec::with_capacity(n),
        h23: Vec::with_capacity(n),
        z: Vec::with_capacity(n),
        z3: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        y3: Vec::with_capacity(n),
    };
    for k in 0..n {
        let h = [a.a11, a.a21, a.a31, a.a13, a.a23].map(|g| coefficient(p.kind, g, &mut rng));
        let z = unit_complex_gaussian(&mut rng);
        let z3 = unit_complex_gaussian(&mut rng);
        let [x1, x2, x3] = [inputs[0][k], inputs[1][k], inputs[2][k]];
        f.y.push(h[0] * x1 + h[1] * x2 + h[2] * x3 + z);
        f.y3.push(h[3] * x1 + h[4] * x2 + z3);
        f.h11.push(h[0]);
        f.h21.push(h[1]);
        f.h31.push(h[2]);
        f.h13.push(h[3]);
        f.h23.push(h[4]);
        f.z.push(z);
        f.z3.push(z3);
    }
    Ok(f)
}

/// Squared fading magnitude `|H|^2` of a link with attenuation `a`.
fn gain<R: Rng + ?Sized>(kind: FadingKind, a: f64, rng: &mut R) -> f64 {
    match kind {
        // The magnitude is constant, so no draw is needed and the result is
        // exact.
        FadingKind::Phase => a * a,
        FadingKind::Rayleigh => a * a * unit_complex_gaussian(rng).norm_sqr(),
    }
}

/// Empirical `κ E[log2(1 + Σ |H_l1|^2 P_l)]` for the three destination cuts
/// `{1,3}`, `{2,3}` and `{1,2,3}`, averaged over `mc.samples` fading draws.
pub fn estimate_ergodic_rate(
    p: &FadingMarcParams,
    kappa: f64,
    mc: &marc_fading::McConfig,
) -> Result<Thresholds> {
    p.validate()?;
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(SimError::InvalidConfig(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    if mc.samples == 0 {
        return Err(SimError::InvalidConfig(
            "at least one sample is needed".into(),
        ));
    }
    let chunks = mc.samples.div_ceil(MC_CHUNK);
    let parts: Vec<[RunningStats; 3]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = MC_CHUNK.min(mc.samples - c * MC_CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(mc.seed, STREAM_ERGODIC, c as u64));
            let mut stats: [RunningStats; 3] = Default::default();
            for _ in 0..len {
                let g11 = gain(p.kind, p.a.a11, &mut rng);
                let g21 = gain(p.kind, p.a.a21, &mut rng);
                let g31 = gain(p.kind, p.a.a31, &mut rng);
                let (s11, s21, s31) = (g11 * p.p[0], g21 * p.p[1], g31 * p.p[2]);
                stats[0].push((1.0 + s11 + s31).log2());
                stats[1].push((1.0 + s21 + s31).log2());
                stats[2].push((1.0 + s11 + s21 + s31).log2());
            }
            stats
        })
        .collect();
    let mut total: [RunningStats; 3] = Default::default();
    for part in &parts {
        for (t, s) in total.iter_mut().zip(part) {
            t.merge(s);
        }
    }
    Ok(Thresholds {
        bits: total.each_ref().map(|s| kappa * s.mean),
        std_error: total.each_ref().map(|s| kappa * s.std_error()),
    })
}
