use serde::{Deserialize, Serialize};

use crate::codebook::Scheme;
use crate::config::ErrorCriterion;

/// Two-sided 95% Wilson score interval for a binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilsonInterval {
    pub lower: f64,
    pub upper: f64,
}

const Z95: f64 = 1.959_963_984_540_054;

pub fn wilson_interval(errors: u64, trials: u64) -> WilsonInterval {
    if trials == 0 {
        return WilsonInterval {
            lower: 0.0,
            upper: 1.0,
        };
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    WilsonInterval {
        lower: (centre - half).clamp(0.0, p),
        upper: (centre + half).clamp(p, 1.0),
    }
}

/// Errors attributed to one data block over all trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDiagnostics {
    pub block: usize,
    pub relay_errors: u64,
    pub dest_errors: u64,
}

/// What happened to each data block in one trial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrialOutcome {
    pub relay_wrong: Vec<bool>,
    pub dest_wrong: Vec<bool>,
}

impl TrialOutcome {
    pub fn new(blocks: usize) -> Self {
        TrialOutcome {
            relay_wrong: vec![false; blocks],
            dest_wrong: vec![false; blocks],
        }
    }
}

/// Aggregated outcome of a Monte Carlo run.
///
/// `p_err_estimate` is the fraction of trials in error under the
/// configured criterion: the destination alone, or destination and relay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimReport {
    pub scheme: Scheme,
    pub version: String,
    /// The resolved configuration that produced this report.
    pub config: serde_json::Value,
    pub trials: u64,
    pub criterion: ErrorCriterion,
    pub relay_block_errors: u64,
    pub dest_block_errors: u64,
    pub relay_trial_errors: u64,
    pub dest_trial_errors: u64,
    pub union_trial_errors: u64,
    pub relay_error_fraction: f64,
    pub p_err_estimate: f64,
    pub interval: WilsonInterval,
    pub per_block: Vec<BlockDiagnostics>,
    /// `first_error_block[b]` counts trials whose earliest wrong block, at
    /// either receiver, is data block `b + 1`.
    pub first_error_block: Vec<u64>,
    pub codewords: usize,
    pub notes: Vec<String>,
    pub wall_clock_secs: f64,
}

/// Equality ignores the wall-clock time.
impl PartialEq for SimReport {
    fn eq(&self, other: &Self) -> bool {
        let strip = |r: &SimReport| SimReport {
            wall_clock_secs: 0.0,
            ..r.clone()
        };
        let (a, b) = (strip(self), strip(other));
        serde_json::to_value(&a).ok() == serde_json::to_value(&b).ok()
    }
}

impl SimReport {
    pub(crate) fn aggregate(
        scheme: Scheme,
        config: serde_json::Value,
        criterion: ErrorCriterion,
        outcomes: &[TrialOutcome],
        blocks: usize,
    ) -> SimReport {
        let mut per_block: Vec<BlockDiagnostics> = (0..blocks)
            .map(|b| BlockDiagnostics {
                block: b + 1,
                relay_errors: 0,
                dest_errors: 0,
            })
            .collect();
        let mut first = vec![0u64; blocks];
        let (mut rly, mut dst, mut union) = (0u64, 0u64, 0u64);
        for o in outcomes {
            for (b, d) in per_block.iter_mut().enumerate() {
                d.relay_errors += o.relay_wrong[b] as u64;
                d.dest_errors += o.dest_wrong[b] as u64;
            }
            let r = o.relay_wrong.iter().any(|&x| x);
            let d = o.dest_wrong.iter().any(|&x| x);
            rly += r as u64;
            dst += d as u64;
            union += (r || d) as u64;
            if let Some(b) = (0..blocks).find(|&b| o.relay_wrong[b] || o.dest_wrong[b]) {
                first[b] += 1;
            }
        }
        let trials = outcomes.len() as u64;
        let errors = match criterion {
            ErrorCriterion::Marc => dst,
            ErrorCriterion::Mabrc => union,
        };
        let frac = |e: u64| {
            if trials == 0 {
                0.0
            } else {
                e as f64 / trials as f64
            }
        };
        SimReport {
            scheme,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            trials,
            criterion,
            relay_block_errors: per_block.iter().map(|d| d.relay_errors).sum(),
            dest_block_errors: per_block.iter().map(|d| d.dest_errors).sum(),
            relay_trial_errors: rly,
            dest_trial_errors: dst,
            union_trial_errors: union,
            relay_error_fraction: frac(rly),
            p_err_estimate: frac(errors),
            interval: wilson_interval(errors, trials),
            per_block,
            first_error_block: first,
            codewords: 0,
            notes: Vec::new(),
            wall_clock_secs: 0.0,
        }
    }
}
