//! Phase- and Rayleigh-fading Gaussian MARCs: the exponential integral,
//! ergodic-rate expectations, relay-decoding conditions, destination
//! thresholds and the verdict on whether separate source-channel coding
//! achieves a given rate.

mod capacity;
mod conditions;
mod e1;
mod error;
mod params;
mod stats;

pub use capacity::{
    expected_log2_capacity, mean_ln_gamma2, mean_ln_one_scale, monte_carlo_log2_capacity,
    Expectation, McConfig, Method, MC_CHUNK,
};
pub use conditions::{
    check_separation_optimal, classify, phase_df_conditions, phase_region, rayleigh_df_bounds,
    rayleigh_df_conditions, rayleigh_region, EntropyCondition, RegionReport, SeparationVerdict,
    SourceEntropies, Thresholds,
};
pub use e1::{exp_integral_e1, exp_scaled_e1};
pub use error::{FadingError, Result};
pub use params::{Attenuations, FadingKind, FadingMarcParams, LinkSnrs};
pub use stats::RunningStats;
