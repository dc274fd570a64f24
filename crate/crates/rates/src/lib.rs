//! Rate conditions for sending correlated sources over a multiple-access
//! relay channel.
//!
//! The checkers evaluate, on a concrete source model, channel and input
//! distribution, the separation-based achievability conditions, the two
//! joint source-channel (correlation-preserving) achievability conditions,
//! the relay broadcast corollary, and the outer bounds. Outer bounds involve
//! a maximization over input distributions, done by [`maximize_mi`].

mod error;
pub mod model;
mod report;
mod search;
pub mod somarc;
mod theorems;

pub use error::{RateError, Result};
pub use model::{CpmInputA, CpmInputB, CrbcInput, DmChannel, SeparationInput, SourceSideInfoModel};
pub use report::{
    Condition, ConditionKind, ConditionReport, OuterVerdict, DEFAULT_SLACK, DEFAULT_STRICTNESS,
    ZERO_ENTROPY,
};
pub use search::{
    maximize_mi, DerivedVar, InputFamily, MiProblem, Objective, SearchConfig, SearchResult,
};
pub use theorems::{
    check_crbc, check_outer_thm2, check_outer_thm3_relay, check_thm1, check_thm6_cpm,
    check_thm7_cpm, evaluate_outer_thm2_at,
};
