//! Uncoded transmission over the semi-orthogonal MARC: each source sends its
//! own bit and the destination reads the pair off the adder output.

use std::time::Instant;

use marc_core::{derive_seed, sample_with};
use marc_rates::somarc::{somarc_channel, somarc_sources};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::Scheme;
use crate::config::ErrorCriterion;
use crate::decode::ChannelSim;
use crate::error::Result;
use crate::report::{SimReport, TrialOutcome};

const STREAM_UNCODED: u64 = 0x50AC;
const CHUNK: usize = 4096;

/// How the destination maps the adder output `Y_S = X1 + X2` back to a
/// source pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SomarcDecoder {
    /// `0 -> (0,0)`, `1 -> (0,1)`, `2 -> (1,1)`, the inverse of the
    /// encoder on the source support.
    #[default]
    Support,
    /// Maps `1 -> (1,0)`, a pair the sources never emit.
    Swapped,
}

impl SomarcDecoder {
    fn decode(self, ys: usize) -> (usize, usize) {
        match (self, ys) {
            (_, 0) => (0, 0),
            (SomarcDecoder::Support, 1) => (0, 1),
            (SomarcDecoder::Swapped, 1) => (1, 0),
            _ => (1, 1),
        }
    }
}

/// Sends one source pair per trial with `X1 = S1`, `X2 = S2` and an idle
/// relay.
pub fn run_uncoded_somarc(trials: usize, seed: u64) -> Result<SimReport> {
    run_uncoded_somarc_with(SomarcDecoder::Support, trials, seed)
}

pub fn run_uncoded_somarc_with(
    decoder: SomarcDecoder,
    trials: usize,
    seed: u64,
) -> Result<SimReport> {
    let start = Instant::now();
    let sources = somarc_sources();
    let sim = ChannelSim::new(&somarc_channel());
    let chunks = trials.div_ceil(CHUNK);
    let per_chunk = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(trials - c * CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_UNCODED, c as u64));
            let draws = sample_with(sources.joint(), len, &mut rng)?;
            let x1: Vec<u8> = draws[0].iter().map(|&s| s as u8).collect();
            let x2: Vec<u8> = draws[1].iter().map(|&s| s as u8).collect();
            let (y, _) = sim.send(&x1, &x2, &vec![0; len], &mut rng);
            Ok((0..len)
                .map(|k| {
                    // The destination output packs (Y_R, Y_S) as 3 Y_R + Y_S.
                    let est = decoder.decode(y[k] as usize % 3);
                    TrialOutcome {
                        relay_wrong: vec![false],
                        dest_wrong: vec![est != (draws[0][k], draws[1][k])],
                    }
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let outcomes: Vec<TrialOutcome> = per_chunk.into_iter().flatten().collect();
    let config = serde_json::json!({ "trials": trials, "seed": seed, "decoder": decoder });
    let mut report = SimReport::aggregate(
        Scheme::UncodedSomarc,
        config,
        ErrorCriterion::Marc,
        &outcomes,
        1,
    );
    report
        .notes
        .push("the relay sends a constant and does not decode".into());
    report.wall_clock_secs = start.elapsed().as_secs_f64();
    Ok(report)
}
