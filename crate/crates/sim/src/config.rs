use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Which receivers must decode for a trial to count as a success.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCriterion {
    /// Only the destination must recover both sources.
    #[default]
    Marc,
    /// The relay must recover them as well.
    Mabrc,
}

/// Binning rates in bits per source sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Rates {
    /// Separate relay and destination bins for each source.
    Separation {
        r1r: f64,
        r2r: f64,
        r1d: f64,
        r2d: f64,
    },
    /// One set of bins per source, used by both joint source-channel schemes.
    Cpm { r1: f64, r2: f64 },
}

impl Rates {
    fn all(&self) -> Vec<f64> {
        match *self {
            Rates::Separation { r1r, r2r, r1d, r2d } => vec![r1r, r2r, r1d, r2d],
            Rates::Cpm { r1, r2 } => vec![r1, r2],
        }
    }

    /// Adds `delta` to every rate, clamping at zero.
    pub fn shifted(&self, delta: f64) -> Rates {
        let f = |r: f64| (r + delta).max(0.0);
        match *self {
            Rates::Separation { r1r, r2r, r1d, r2d } => Rates::Separation {
                r1r: f(r1r),
                r2r: f(r2r),
                r1d: f(r1d),
                r2d: f(r2d),
            },
            Rates::Cpm { r1, r2 } => Rates::Cpm {
                r1: f(r1),
                r2: f(r2),
            },
        }
    }
}

/// Parameters shared by the block-Markov simulators.
///
/// `B` source blocks of `m` samples are sent over `B + 1` channel blocks of
/// `n` uses each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockMarkovConfig {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "B")]
    pub blocks: usize,
    pub rates: Rates,
    /// Strong-typicality parameter. `None` tests only that every letter
    /// tuple lies in the support, which is the only workable choice at
    /// blocklengths around ten.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub criterion: ErrorCriterion,
}

/// Largest number of stored codewords, and of source sequence pairs
/// enumerated by one decoder.
pub const TABLE_LIMIT: u128 = 1 << 20;

impl BlockMarkovConfig {
    pub fn separation(m: usize, n: usize, blocks: usize, r: [f64; 4]) -> Self {
        BlockMarkovConfig {
            m,
            n,
            blocks,
            rates: Rates::Separation {
                r1r: r[0],
                r2r: r[1],
                r1d: r[2],
                r2d: r[3],
            },
            epsilon: None,
            seed: 0,
            criterion: ErrorCriterion::Marc,
        }
    }

    pub fn cpm(n: usize, blocks: usize, r: [f64; 2]) -> Self {
        BlockMarkovConfig {
            m: n,
            n,
            blocks,
            rates: Rates::Cpm { r1: r[0], r2: r[1] },
            epsilon: None,
            seed: 0,
            criterion: ErrorCriterion::Marc,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epsilon(mut self, epsilon: Option<f64>) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_criterion(mut self, criterion: ErrorCriterion) -> Self {
        self.criterion = criterion;
        self
    }

    /// Channel uses per source sample.
    pub fn kappa(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SimError::InvalidConfig(msg));
        if self.m == 0 || self.n == 0 {
            return bad(format!(
                "block lengths must be positive, got m={} n={}",
                self.m, self.n
            ));
        }
        if self.blocks == 0 {
            return bad("B must be at least 1".into());
        }
        if let Some(r) = self
            .rates
            .all()
            .into_iter()
            .find(|r| !(*r >= 0.0) || !r.is_finite())
        {
            return bad(format!("rates must be finite and non-negative, got {r}"));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0) {
                return bad(format!("epsilon must be positive, got {e}"));
            }
        }
        Ok(())
    }

    /// Checks `n <= ceil(kappa * m)` for a target source-channel rate.
    pub fn check_kappa(&self, kappa: f64) -> Result<()> {
        let limit = (kappa * self.m as f64 - 1e-9).ceil();
        if self.n as f64 > limit {
            return Err(SimError::InvalidConfig(format!(
                "n = {} exceeds ceil(kappa * m) = {limit} for kappa = {kappa}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Number of index bits `ceil(len * rate)`, so that rates are never rounded
/// down.
pub fn index_bits(len: usize, rate: f64) -> u32 {
    let bits = (len as f64 * rate - 1e-9).ceil().max(0.0);
    bits as u32
}
