use marc_core::{JointPmf, TypicalityChecker};

use crate::error::Result;

/// A typicality test over a fixed, ordered subset of the scheme's
/// variables. Sequences are passed in the same order as the names.
#[derive(Debug, Clone)]
pub(crate) struct Tester {
    checker: TypicalityChecker,
    strides: Vec<usize>,
}

impl Tester {
    pub fn new(joint: &JointPmf, names: &[&str], epsilon: Option<f64>) -> Result<Self> {
        let marginal = joint.reorder(names)?;
        // An infinite epsilon reduces strong typicality to support membership.
        let checker = TypicalityChecker::new(&marginal, epsilon.unwrap_or(f64::INFINITY))?;
        Ok(Tester {
            strides: marginal.strides().to_vec(),
            checker,
        })
    }

    /// Tests the tuple; `scratch` is reused to avoid allocating.
    pub fn test(&self, seqs: &[&[u8]], scratch: &mut Vec<usize>) -> bool {
        let n = seqs[0].len();
        scratch.clear();
        for k in 0..n {
            let cell: usize = seqs
                .iter()
                .zip(&self.strides)
                .map(|(s, st)| s[k] as usize * st)
                .sum();
            if !self.checker.in_support(cell) {
                return false;
            }
            scratch.push(cell);
        }
        self.checker.is_typical_cells(scratch)
    }
}
