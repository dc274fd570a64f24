use serde::{Deserialize, Serialize};

use crate::error::{ProbError, Result};
use crate::pmf::{
    advance, check_variables, check_weights, strides_of, Variable, NORMALIZATION_TOL,
};

/// A stochastic kernel `p(outputs | given)`.
///
/// The kernel is stored as one row per conditioning tuple. Rows are ordered
/// row-major over `given` and each row is row-major over `outputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalPmf {
    given: Vec<Variable>,
    outputs: Vec<Variable>,
    kernel: Vec<f64>,
    out_cells: usize,
}

impl ConditionalPmf {
    pub fn new(given: Vec<Variable>, outputs: Vec<Variable>, kernel: Vec<f64>) -> Result<Self> {
        Self::build(given, outputs, kernel, false)
    }

    /// Like [`ConditionalPmf::new`] but rescales each row to sum to one.
    pub fn normalized(
        given: Vec<Variable>,
        outputs: Vec<Variable>,
        kernel: Vec<f64>,
    ) -> Result<Self> {
        Self::build(given, outputs, kernel, true)
    }

    fn build(
        given: Vec<Variable>,
        outputs: Vec<Variable>,
        mut kernel: Vec<f64>,
        rescale: bool,
    ) -> Result<Self> {
        let mut all = given.clone();
        all.extend(outputs.iter().cloned());
        let cells = check_variables(&all)?;
        if kernel.len() != cells {
            return Err(ProbError::ShapeMismatch {
                expected: cells,
                got: kernel.len(),
            });
        }
        check_weights(&kernel)?;
        let out_cells: usize = outputs.iter().map(|v| v.size).product();
        for (row, chunk) in kernel.chunks_mut(out_cells).enumerate() {
            let sum: f64 = chunk.iter().sum();
            if rescale && sum > 0.0 {
                chunk.iter_mut().for_each(|w| *w /= sum);
            } else if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(ProbError::RowNotNormalized { row, sum });
            }
        }
        Ok(ConditionalPmf {
            given,
            outputs,
            kernel,
            out_cells,
        })
    }

    /// Builds a kernel by evaluating `f(given, output)` on every pair of
    /// tuples, then normalizing each row.
    pub fn from_fn(
        given: Vec<Variable>,
        outputs: Vec<Variable>,
        f: impl Fn(&[usize], &[usize]) -> f64,
    ) -> Result<Self> {
        let gsizes: Vec<usize> = given.iter().map(|v| v.size).collect();
        let osizes: Vec<usize> = outputs.iter().map(|v| v.size).collect();
        let mut kernel = Vec::new();
        let mut g = vec![0; gsizes.len()];
        loop {
            let mut o = vec![0; osizes.len()];
            loop {
                kernel.push(f(&g, &o));
                if !advance(&mut o, &osizes) {
                    break;
                }
            }
            if !advance(&mut g, &gsizes) {
                break;
            }
        }
        Self::normalized(given, outputs, kernel)
    }

    /// Kernel putting all mass on `f(given)`.
    pub fn deterministic(
        given: Vec<Variable>,
        output: Variable,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        let size = output.size;
        let name = output.name.clone();
        let bad = std::cell::Cell::new(None);
        let k = Self::from_fn(given, vec![output], |g, o| {
            let y = f(g);
            if y >= size {
                bad.set(Some(y));
            }
            if o[0] == y {
                1.0
            } else {
                0.0
            }
        });
        if let Some(y) = bad.get() {
            return Err(ProbError::SymbolOutOfRange {
                variable: name,
                symbol: y,
                size,
            });
        }
        k
    }

    /// Kernel whose output ignores the conditioning variables.
    pub fn constant(given: Vec<Variable>, outputs: Vec<Variable>, dist: &[f64]) -> Result<Self> {
        let rows: usize = given.iter().map(|v| v.size).product();
        let kernel = dist
            .iter()
            .copied()
            .cycle()
            .take(rows * dist.len())
            .collect();
        Self::new(given, outputs, kernel)
    }

    pub fn given(&self) -> &[Variable] {
        &self.given
    }

    pub fn outputs(&self) -> &[Variable] {
        &self.outputs
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    pub fn output_cells(&self) -> usize {
        self.out_cells
    }

    pub fn num_rows(&self) -> usize {
        self.kernel.len() / self.out_cells
    }

    pub(crate) fn given_strides(&self) -> Vec<usize> {
        strides_of(&self.given.iter().map(|v| v.size).collect::<Vec<_>>())
    }

    pub fn row_index(&self, given: &[usize]) -> usize {
        given
            .iter()
            .zip(self.given_strides())
            .map(|(a, s)| a * s)
            .sum()
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.kernel[row * self.out_cells..(row + 1) * self.out_cells]
    }

    pub fn prob(&self, given: &[usize], output_cell: usize) -> f64 {
        self.row(self.row_index(given))[output_cell]
    }

    /// Renames one variable on either side of the kernel.
    pub fn rename(mut self, from: &str, to: &str) -> Result<Self> {
        let slot = self
            .given
            .iter_mut()
            .chain(self.outputs.iter_mut())
            .find(|v| v.name == from)
            .ok_or_else(|| ProbError::UnknownVariable(from.to_string()))?;
        slot.name = to.to_string();
        let mut all = self.given.clone();
        all.extend(self.outputs.iter().cloned());
        check_variables(&all)?;
        Ok(self)
    }
}

#[derive(Serialize, Deserialize)]
struct KernelWire {
    given: Vec<Variable>,
    outputs: Vec<Variable>,
    kernel: Vec<f64>,
}

impl Serialize for ConditionalPmf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KernelWire {
            given: self.given.clone(),
            outputs: self.outputs.clone(),
            kernel: self.kernel.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConditionalPmf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = KernelWire::deserialize(d)?;
        ConditionalPmf::new(w.given, w.outputs, w.kernel).map_err(serde::de::Error::custom)
    }
}
