//! Error rate against the distance of the binning rates from the
//! separation-scheme thresholds.

use marc_rates::{check_thm1, DmChannel, SeparationInput, SourceSideInfoModel};
use serde::{Deserialize, Serialize};

use crate::config::{index_bits, BlockMarkovConfig, Rates};
use crate::error::{Result, SimError};
use crate::report::{SimReport, WilsonInterval};
use crate::separation::run_separation_df;

/// One point of a margin sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub rates: Rates,
    pub margin_bits: f64,
    pub p_err: f64,
    pub interval: WilsonInterval,
    pub trials: u64,
}

/// The smallest distance, in bits per source sample, between an effective
/// binning rate and either side of its separation condition.
///
/// Each condition `H < κ I` is split by the rate `R` that serves it (relay
/// bins for the relay conditions, destination bins for the destination
/// ones, sums for the sum conditions); the margin is
/// `min(R - H, κ I - R)`. Effective rates use the integer codebook sizes,
/// `ceil(m R) / m`.
pub fn separation_rate_margin(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    input: &SeparationInput,
    cfg: &BlockMarkovConfig,
) -> Result<f64> {
    let Rates::Separation { r1r, r2r, r1d, r2d } = cfg.rates else {
        return Err(SimError::InvalidConfig(
            "margin sweeps use separation rates".into(),
        ));
    };
    let eff = |r: f64| index_bits(cfg.m, r) as f64 / cfg.m as f64;
    let (r1r, r2r, r1d, r2d) = (eff(r1r), eff(r2r), eff(r1d), eff(r2d));
    let report = check_thm1(model, ch, input, cfg.kappa())?;
    let mut margin = f64::INFINITY;
    for c in &report.conditions {
        let rate = match c.label.as_str() {
            "thm1.rly.S1" => r1r,
            "thm1.rly.S2" => r2r,
            "thm1.rly.S1S2" => r1r + r2r,
            "thm1.dst.S1" => r1d,
            "thm1.dst.S2" => r2d,
            "thm1.dst.S1S2" => r1d + r2d,
            _ => continue,
        };
        margin = margin.min((rate - c.lhs_bits).min(c.rhs_bits - rate));
    }
    Ok(margin)
}

/// Runs the separation simulator once per configuration and pairs each
/// error estimate with its rate margin.
pub fn separation_margin_sweep(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    input: &SeparationInput,
    configs: &[BlockMarkovConfig],
    trials: usize,
) -> Result<(Vec<SweepPoint>, Vec<SimReport>)> {
    let mut points = Vec::with_capacity(configs.len());
    let mut reports = Vec::with_capacity(configs.len());
    for cfg in configs {
        let margin_bits = separation_rate_margin(model, ch, input, cfg)?;
        let report = run_separation_df(model, ch, input, cfg, trials)?;
        points.push(SweepPoint {
            rates: cfg.rates,
            margin_bits,
            p_err: report.p_err_estimate,
            interval: report.interval,
            trials: report.trials,
        });
        reports.push(report);
    }
    Ok((points, reports))
}

/// Whether error estimates never increase as the margin grows.
pub fn is_monotone(points: &[SweepPoint]) -> bool {
    let mut sorted: Vec<&SweepPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.margin_bits.total_cmp(&b.margin_bits));
    sorted.windows(2).all(|w| w[1].p_err <= w[0].p_err)
}
