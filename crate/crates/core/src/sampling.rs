use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ProbError, Result};
use crate::pmf::JointPmf;

/// Draws `n` i.i.d. tuples from `pmf` with a generator seeded from `seed`.
///
/// Returns one sequence per variable, in pmf order.
pub fn sample(pmf: &JointPmf, n: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    sample_with(pmf, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Like [`sample`] but draws from a caller-owned generator.
pub fn sample_with<R: Rng + ?Sized>(
    pmf: &JointPmf,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>> {
    let dist = WeightedIndex::new(pmf.weights())
        .map_err(|e| ProbError::InvalidArgument(format!("cannot sample: {e}")))?;
    let strides = pmf.strides();
    let sizes = pmf.sizes();
    let mut out = vec![Vec::with_capacity(n); sizes.len()];
    for _ in 0..n {
        let cell = dist.sample(rng);
        for (v, seq) in out.iter_mut().enumerate() {
            seq.push((cell / strides[v]) % sizes[v]);
        }
    }
    Ok(out)
}

/// Derives an independent stream seed from a base seed, a stream label and
/// an index (SplitMix64 finalizer over the combined words).
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
