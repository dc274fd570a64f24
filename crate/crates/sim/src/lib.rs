//! Monte Carlo simulation of the coding schemes for correlated sources over
//! a multiple-access relay channel, at blocklengths small enough that
//! decoders can enumerate every candidate.
//!
//! Three block-Markov schemes are covered: separate Slepian-Wolf binning
//! with decode-and-forward channel coding, and the two joint
//! source-channel schemes built on correlation-preserving codewords. Each
//! run reports how often the relay and the destination recover the sources.
//! The crate also simulates uncoded transmission over the semi-orthogonal
//! example channel and generates frames of the fading Gaussian channel.

mod codebook;
mod config;
mod cpm;
mod decode;
mod error;
mod fading;
mod report;
mod separation;
mod seq;
mod sweep;
mod typicality;
mod uncoded;

pub use codebook::{
    build_codebook, CodeTable, CodebookSpec, CpmACodebook, CpmBCodebook, Filler, Scheme,
    SchemeInput, SeparationCodebook,
};
pub use config::{index_bits, BlockMarkovConfig, ErrorCriterion, Rates, TABLE_LIMIT};
pub use cpm::{run_cpm_scheme_a, run_cpm_scheme_b};
pub use error::{Result, SimError};
pub use fading::{estimate_ergodic_rate, simulate_fading_frame, GaussianMarcFrame};
pub use report::{wilson_interval, BlockDiagnostics, SimReport, WilsonInterval};
pub use separation::run_separation_df;
pub use seq::{BinMap, SeqSpace};
pub use sweep::{is_monotone, separation_margin_sweep, separation_rate_margin, SweepPoint};
pub use uncoded::{run_uncoded_somarc, run_uncoded_somarc_with, SomarcDecoder};
