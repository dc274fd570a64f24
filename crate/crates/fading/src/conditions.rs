//! Relay-decoding conditions, destination thresholds and the separation
//! verdict for phase and Rayleigh fading.

use marc_rates::model::{S1, S2, W, W3};
use marc_rates::{SourceSideInfoModel, DEFAULT_SLACK, DEFAULT_STRICTNESS, ZERO_ENTROPY};
use serde::{Deserialize, Serialize};

use crate::capacity::{expected_log2_capacity, mean_ln_one_scale, Expectation, McConfig};
use crate::error::{FadingError, Result};
use crate::params::{FadingKind, FadingMarcParams};

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(FadingError::Domain(format!(
            "kappa must be positive, got {kappa}"
        )))
    }
}

/// Relay-decoding conditions for phase fading: the direct and relay links
/// into the destination are no stronger than the source links into the
/// relay.
pub fn phase_df_conditions(p: &FadingMarcParams) -> Result<[bool; 3]> {
    p.expect_kind(FadingKind::Phase)?;
    let s = p.snrs();
    Ok([
        s.s11 + s.s31 <= s.s13,
        s.s21 + s.s31 <= s.s23,
        s.s11 + s.s21 + s.s31 <= s.s13 + s.s23,
    ])
}

/// `κ log2(1 + SNR)` for the three destination cuts.
pub fn phase_region(p: &FadingMarcParams, kappa: f64) -> Result<[f64; 3]> {
    p.expect_kind(FadingKind::Phase)?;
    check_kappa(kappa)?;
    let s = p.snrs();
    Ok([
        kappa * (1.0 + s.s11 + s.s31).log2(),
        kappa * (1.0 + s.s21 + s.s31).log2(),
        kappa * (1.0 + s.s11 + s.s21 + s.s31).log2(),
    ])
}

/// Right-hand sides of the Rayleigh relay-decoding conditions.
pub fn rayleigh_df_bounds(p: &FadingMarcParams) -> Result<[f64; 3]> {
    p.expect_kind(FadingKind::Rayleigh)?;
    let s = p.snrs();
    for (name, v) in [("a13^2 P1", s.s13), ("a23^2 P2", s.s23)] {
        if v <= 0.0 {
            return Err(FadingError::Domain(format!(
                "the relay-decoding conditions need {name} > 0"
            )));
        }
    }
    let (f13, f23) = (mean_ln_one_scale(s.s13)?, mean_ln_one_scale(s.s23)?);
    let third = if (s.s23 - s.s13).abs() <= 1e-5 * s.s13.max(s.s23) {
        // Limit of the difference quotient at the midpoint, second order in
        // the gap: 1 / f'(a) with
        // f'(a) = (1 - f(a)/a) / a.
        let a = 0.5 * (s.s13 + s.s23);
        let f = mean_ln_one_scale(a)?;
        a * a / (a - f)
    } else {
        (s.s23 - s.s13) / (f23 - f13)
    };
    Ok([s.s13 / f13, s.s23 / f23, third])
}

pub fn rayleigh_df_conditions(p: &FadingMarcParams) -> Result<[bool; 3]> {
    let b = rayleigh_df_bounds(p)?;
    let s = p.snrs();
    Ok([
        1.0 + s.s11 + s.s31 <= b[0],
        1.0 + s.s21 + s.s31 <= b[1],
        1.0 + s.s11 + s.s21 + s.s31 <= b[2],
    ])
}

/// Destination thresholds in bits per source sample, with Monte Carlo
/// standard errors where a closed form is not available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub bits: [f64; 3],
    pub std_error: [f64; 3],
}

fn ergodic(scales: &[f64], kappa: f64, mc: &McConfig) -> Result<Expectation> {
    let active: Vec<f64> = scales.iter().copied().filter(|s| *s > 0.0).collect();
    if active.is_empty() {
        return Ok(Expectation {
            bits: 0.0,
            std_error: 0.0,
            method: crate::capacity::Method::Exact,
        });
    }
    let e = expected_log2_capacity(&active, mc)?;
    Ok(Expectation {
        bits: kappa * e.bits,
        std_error: kappa * e.std_error,
        method: e.method,
    })
}

/// `κ E[log2(1 + Σ a^2 |U|^2 P)]` for the three destination cuts. Links
/// with zero SNR drop out, so cuts with at most two active links are exact.
pub fn rayleigh_region(p: &FadingMarcParams, kappa: f64, mc: &McConfig) -> Result<Thresholds> {
    p.expect_kind(FadingKind::Rayleigh)?;
    check_kappa(kappa)?;
    let s = p.snrs();
    let e = [
        ergodic(&[s.s11, s.s31], kappa, mc)?,
        ergodic(&[s.s21, s.s31], kappa, mc)?,
        ergodic(&[s.s11, s.s21, s.s31], kappa, mc)?,
    ];
    Ok(Thresholds {
        bits: e.map(|x| x.bits),
        std_error: e.map(|x| x.std_error),
    })
}

/// Conditional source entropies in bits, on the destination and relay
/// sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceEntropies {
    pub h1_given_2w: f64,
    pub h2_given_1w: f64,
    pub h12_given_w: f64,
    pub h1_given_2w3: f64,
    pub h2_given_1w3: f64,
    pub h12_given_w3: f64,
}

impl SourceEntropies {
    /// Entropies stated directly. Only non-negativity is enforced, so
    /// hypothetical values can be explored; see [`Self::is_realizable`].
    pub fn new(destination: [f64; 3], relay: [f64; 3]) -> Result<Self> {
        if let Some(v) = destination
            .iter()
            .chain(&relay)
            .find(|v| !(**v >= 0.0) || !v.is_finite())
        {
            return Err(FadingError::InvalidParams(format!(
                "entropies must be finite and non-negative, got {v}"
            )));
        }
        Ok(SourceEntropies {
            h1_given_2w: destination[0],
            h2_given_1w: destination[1],
            h12_given_w: destination[2],
            h1_given_2w3: relay[0],
            h2_given_1w3: relay[1],
            h12_given_w3: relay[2],
        })
    }

    pub fn from_model(model: &SourceSideInfoModel) -> Self {
        let e = SourceEntropies {
            h1_given_2w: model.h(&[S1], &[S2, W]),
            h2_given_1w: model.h(&[S2], &[S1, W]),
            h12_given_w: model.h(&[S1, S2], &[W]),
            h1_given_2w3: model.h(&[S1], &[S2, W3]),
            h2_given_1w3: model.h(&[S2], &[S1, W3]),
            h12_given_w3: model.h(&[S1, S2], &[W3]),
        };
        debug_assert!(e.is_realizable(1e-9));
        e
    }

    pub fn destination(&self) -> [f64; 3] {
        [self.h1_given_2w, self.h2_given_1w, self.h12_given_w]
    }

    pub fn relay(&self) -> [f64; 3] {
        [self.h1_given_2w3, self.h2_given_1w3, self.h12_given_w3]
    }

    /// Whether some source model could produce these values: the joint
    /// entropy is at least the sum of the two conditional ones, since
    /// `H(S1,S2|W) = H(S1|S2,W) + H(S2|W) >= H(S1|S2,W) + H(S2|S1,W)`.
    pub fn is_realizable(&self, tol: f64) -> bool {
        let ok = |[a, b, ab]: [f64; 3]| ab + tol >= a + b;
        ok(self.destination()) && ok(self.relay())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SeparationVerdict {
    /// Relay-decoding conditions and all strict inequalities hold.
    Achievable,
    /// A necessary (non-strict) inequality fails.
    NotAchievable,
    /// Neither: equality within the strictness margin, or the
    /// relay-decoding conditions fail so only the converse applies.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCondition {
    pub label: String,
    pub lhs_bits: f64,
    pub rhs_bits: f64,
    pub margin_bits: f64,
    /// `lhs < rhs` with the strictness margin (or a zero lhs).
    pub strict_holds: bool,
    /// `lhs <= rhs` with slack.
    pub nonstrict_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub kind: FadingKind,
    pub kappa: f64,
    pub df_conditions: [bool; 3],
    pub df_conditions_hold: bool,
    pub thresholds: [f64; 3],
    pub threshold_std_error: [f64; 3],
    pub conditions: Vec<EntropyCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mabrc_entropy_conditions_hold: Option<bool>,
    pub verdict: SeparationVerdict,
}

const LABELS: [&str; 3] = ["fading.dst.S1", "fading.dst.S2", "fading.dst.S1S2"];

/// Compares entropies with given thresholds and classifies the outcome.
///
/// With `mabrc`, achievability additionally needs each relay-side entropy to
/// be at most its destination-side counterpart, so that decoding at the
/// destination implies decoding at the relay.
pub fn classify(
    e: &SourceEntropies,
    thresholds: [f64; 3],
    df: [bool; 3],
    mabrc: bool,
) -> (Vec<EntropyCondition>, Option<bool>, SeparationVerdict) {
    let conditions: Vec<EntropyCondition> = LABELS
        .iter()
        .zip(e.destination())
        .zip(thresholds)
        .map(|((label, lhs), rhs)| EntropyCondition {
            label: label.to_string(),
            lhs_bits: lhs,
            rhs_bits: rhs,
            margin_bits: rhs - lhs,
            strict_holds: lhs <= ZERO_ENTROPY || lhs < rhs - DEFAULT_STRICTNESS,
            nonstrict_holds: lhs <= rhs + DEFAULT_SLACK,
        })
        .collect();
    let relay_ok = mabrc.then(|| {
        e.relay()
            .iter()
            .zip(e.destination())
            .all(|(r, d)| *r <= d + DEFAULT_SLACK)
    });
    let verdict = if conditions.iter().any(|c| !c.nonstrict_holds) {
        SeparationVerdict::NotAchievable
    } else if df.iter().all(|&d| d)
        && conditions.iter().all(|c| c.strict_holds)
        && relay_ok != Some(false)
    {
        SeparationVerdict::Achievable
    } else {
        SeparationVerdict::Boundary
    };
    (conditions, relay_ok, verdict)
}

/// Whether separate source and channel coding achieves `kappa` on the
/// fading channel, following the relay-decoding conditions and the
/// destination thresholds for the channel's fading kind.
pub fn check_separation_optimal(
    e: &SourceEntropies,
    p: &FadingMarcParams,
    kappa: f64,
    mabrc: bool,
    mc: &McConfig,
) -> Result<RegionReport> {
    check_kappa(kappa)?;
    let (df, th) = match p.kind {
        FadingKind::Phase => (
            phase_df_conditions(p)?,
            Thresholds {
                bits: phase_region(p, kappa)?,
                std_error: [0.0; 3],
            },
        ),
        FadingKind::Rayleigh => (rayleigh_df_conditions(p)?, rayleigh_region(p, kappa, mc)?),
    };
    let (conditions, mabrc_ok, verdict) = classify(e, th.bits, df, mabrc);
    Ok(RegionReport {
        kind: p.kind,
        kappa,
        df_conditions: df,
        df_conditions_hold: df.iter().all(|&d| d),
        thresholds: th.bits,
        threshold_std_error: th.std_error,
        conditions,
        mabrc_entropy_conditions_hold: mabrc_ok,
        verdict,
    })
}
