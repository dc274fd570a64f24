//! Finite discrete distributions over named variables.
//!
//! A [`JointPmf`] is a dense tensor of probabilities indexed by a list of
//! named variables in row-major order, with the last variable varying
//! fastest. Everything else in the workspace (rate-region checkers, the
//! block-Markov simulator) is built on the operations here: marginals,
//! kernels, entropies in bits, common parts, strong typicality and seeded
//! sampling.

mod common;
mod conditional;
mod error;
mod factor;
mod info;
mod pmf;
mod sampling;
mod typical;

pub use common::{gacs_korner_common_part, CommonPart};
pub use conditional::ConditionalPmf;
pub use error::{ProbError, Result};
pub use factor::{factorization_violation, validate_factorization, Factor};
pub use info::{entropy, is_markov_chain, mutual_information};
pub use pmf::{JointPmf, Variable, NORMALIZATION_TOL};
pub use sampling::{derive_seed, sample, sample_with};
pub use typical::{strongly_typical, TypicalityChecker, TypicalityQuery};
