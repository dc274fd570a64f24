use serde::{Deserialize, Serialize};

use crate::error::{ProbError, Result};
use crate::pmf::JointPmf;

const SLACK: f64 = 1e-12;

/// Parameters of a strong-typicality test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypicalityQuery {
    pub epsilon: f64,
    pub n: usize,
}

/// Strong typicality test against a fixed pmf, reusable across many
/// candidate tuples.
///
/// A tuple of sequences is typical when every joint letter has positive
/// probability and each empirical frequency satisfies
/// `|N(a)/n - p(a)| <= epsilon * p(a)`. Counts are kept sparse, so the cost
/// of one test is `O(n log n)` regardless of the alphabet size.
#[derive(Debug, Clone)]
pub struct TypicalityChecker {
    weights: Vec<f64>,
    strides: Vec<usize>,
    sizes: Vec<usize>,
    support: usize,
    epsilon: f64,
    /// Epsilon is so large that no frequency can violate its bound, so only
    /// membership in the support matters.
    support_only: bool,
}

impl TypicalityChecker {
    pub fn new(pmf: &JointPmf, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(ProbError::InvalidArgument(format!(
                "epsilon {epsilon} must be >= 0"
            )));
        }
        let p_min = pmf
            .weights()
            .iter()
            .copied()
            .filter(|&w| w > 0.0)
            .fold(f64::INFINITY, f64::min);
        // N(a)/n - p(a) <= 1 - p(a) <= epsilon * p(a) for every support letter.
        let support_only = epsilon >= 1.0 && epsilon * p_min >= 1.0 - p_min;
        Ok(TypicalityChecker {
            support_only,
            weights: pmf.weights().to_vec(),
            strides: pmf.strides().to_vec(),
            sizes: pmf.sizes(),
            support: pmf.weights().iter().filter(|&&w| w > 0.0).count(),
            epsilon,
        })
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_support_only(&self) -> bool {
        self.support_only
    }

    pub fn in_support(&self, cell: usize) -> bool {
        self.weights[cell] > 0.0
    }

    /// Tests the letters given as joint cell indices. The slice is sorted in
    /// place.
    pub fn is_typical_cells(&self, cells: &mut [usize]) -> bool {
        let n = cells.len();
        if n == 0 {
            return false;
        }
        if cells.iter().any(|&c| self.weights[c] <= 0.0) {
            return false;
        }
        if self.support_only {
            return true;
        }
        cells.sort_unstable();
        let nf = n as f64;
        let mut distinct = 0;
        let mut i = 0;
        while i < n {
            let c = cells[i];
            let mut j = i + 1;
            while j < n && cells[j] == c {
                j += 1;
            }
            let p = self.weights[c];
            if ((j - i) as f64 / nf - p).abs() > self.epsilon * p + SLACK {
                return false;
            }
            distinct += 1;
            i = j;
        }
        // A support letter that never occurs deviates by p(a), which is
        // within tolerance only when epsilon >= 1.
        self.epsilon >= 1.0 || distinct == self.support
    }
}

/// Whether the tuple of sequences `seqs` (one per pmf variable, in pmf
/// order) is strongly typical.
pub fn strongly_typical(seqs: &[Vec<usize>], pmf: &JointPmf, q: TypicalityQuery) -> Result<bool> {
    let vars = pmf.variables();
    if seqs.len() != vars.len() {
        return Err(ProbError::LengthMismatch {
            expected: vars.len(),
            got: seqs.len(),
        });
    }
    if q.n == 0 {
        return Err(ProbError::InvalidArgument(
            "sequence length must be positive".into(),
        ));
    }
    for (seq, v) in seqs.iter().zip(vars) {
        if seq.len() != q.n {
            return Err(ProbError::LengthMismatch {
                expected: q.n,
                got: seq.len(),
            });
        }
        if let Some(&s) = seq.iter().find(|&&s| s >= v.size) {
            return Err(ProbError::SymbolOutOfRange {
                variable: v.name.clone(),
                symbol: s,
                size: v.size,
            });
        }
    }
    let checker = TypicalityChecker::new(pmf, q.epsilon)?;
    let mut cells: Vec<usize> = (0..q.n)
        .map(|k| {
            seqs.iter()
                .zip(checker.strides())
                .map(|(s, st)| s[k] * st)
                .sum()
        })
        .collect();
    Ok(checker.is_typical_cells(&mut cells))
}
