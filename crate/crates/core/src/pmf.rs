use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::conditional::ConditionalPmf;
use crate::error::{ProbError, Result};

/// Absolute tolerance on the total mass of a distribution.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A named finite random variable with alphabet `{0, .., size - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub size: usize,
}

impl Variable {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Variable {
            name: name.into(),
            size,
        }
    }
}

/// Joint probability mass function over an ordered list of variables.
///
/// Weights are stored densely in row-major order. A pmf over zero variables
/// is the point mass on the empty tuple and has a single weight of one.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    vars: Vec<Variable>,
    weights: Vec<f64>,
    strides: Vec<usize>,
}

pub(crate) fn strides_of(sizes: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    strides
}

pub(crate) fn check_variables(vars: &[Variable]) -> Result<usize> {
    let mut seen = HashSet::new();
    let mut cells = 1usize;
    for v in vars {
        if !seen.insert(v.name.as_str()) {
            return Err(ProbError::DuplicateVariable(v.name.clone()));
        }
        if v.size == 0 {
            return Err(ProbError::EmptyAlphabet(v.name.clone()));
        }
        cells = cells
            .checked_mul(v.size)
            .ok_or_else(|| ProbError::InvalidArgument("alphabet product overflows".into()))?;
    }
    Ok(cells)
}

pub(crate) fn check_weights(weights: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for (cell, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(ProbError::InvalidWeight { cell, value: w });
        }
        sum += w;
    }
    Ok(sum)
}

/// Advances a row-major odometer; returns false after the last tuple.
pub(crate) fn advance(idx: &mut [usize], sizes: &[usize]) -> bool {
    for ax in (0..idx.len()).rev() {
        idx[ax] += 1;
        if idx[ax] < sizes[ax] {
            return true;
        }
        idx[ax] = 0;
    }
    false
}

impl JointPmf {
    /// Builds a pmf, rejecting weights whose total differs from one by more
    /// than [`NORMALIZATION_TOL`].
    pub fn new(vars: Vec<Variable>, weights: Vec<f64>) -> Result<Self> {
        let cells = check_variables(&vars)?;
        if weights.len() != cells {
            return Err(ProbError::ShapeMismatch {
                expected: cells,
                got: weights.len(),
            });
        }
        let sum = check_weights(&weights)?;
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(ProbError::NotNormalized {
                sum,
                tol: NORMALIZATION_TOL,
            });
        }
        let sizes: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok(JointPmf {
            strides: strides_of(&sizes),
            vars,
            weights,
        })
    }

    /// Builds a pmf from nonnegative weights of any positive total by
    /// dividing through by that total.
    pub fn normalized(vars: Vec<Variable>, mut weights: Vec<f64>) -> Result<Self> {
        let cells = check_variables(&vars)?;
        if weights.len() != cells {
            return Err(ProbError::ShapeMismatch {
                expected: cells,
                got: weights.len(),
            });
        }
        let sum = check_weights(&weights)?;
        if sum <= 0.0 {
            return Err(ProbError::NotNormalized {
                sum,
                tol: NORMALIZATION_TOL,
            });
        }
        weights.iter_mut().for_each(|w| *w /= sum);
        let sizes: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok(JointPmf {
            strides: strides_of(&sizes),
            vars,
            weights,
        })
    }

    /// Builds a pmf by evaluating `f` on every tuple, then normalizing.
    pub fn from_fn(vars: Vec<Variable>, f: impl Fn(&[usize]) -> f64) -> Result<Self> {
        let cells = check_variables(&vars)?;
        let sizes: Vec<usize> = vars.iter().map(|v| v.size).collect();
        let mut weights = Vec::with_capacity(cells);
        let mut idx = vec![0; sizes.len()];
        loop {
            weights.push(f(&idx));
            if !advance(&mut idx, &sizes) {
                break;
            }
        }
        Self::normalized(vars, weights)
    }

    /// Uniform distribution over all tuples.
    pub fn uniform(vars: Vec<Variable>) -> Result<Self> {
        let cells = check_variables(&vars)?;
        Self::normalized(vars, vec![1.0; cells])
    }

    /// Point mass on one tuple.
    pub fn point(vars: Vec<Variable>, at: &[usize]) -> Result<Self> {
        let cells = check_variables(&vars)?;
        let sizes: Vec<usize> = vars.iter().map(|v| v.size).collect();
        if at.len() != vars.len() {
            return Err(ProbError::LengthMismatch {
                expected: vars.len(),
                got: at.len(),
            });
        }
        for (v, &s) in vars.iter().zip(at) {
            if s >= v.size {
                return Err(ProbError::SymbolOutOfRange {
                    variable: v.name.clone(),
                    symbol: s,
                    size: v.size,
                });
            }
        }
        let strides = strides_of(&sizes);
        let mut weights = vec![0.0; cells];
        weights[at.iter().zip(&strides).map(|(a, s)| a * s).sum::<usize>()] = 1.0;
        Ok(JointPmf {
            vars,
            weights,
            strides,
        })
    }

    /// The distribution of zero variables.
    pub fn unit() -> Self {
        JointPmf {
            vars: Vec::new(),
            weights: vec![1.0],
            strides: Vec::new(),
        }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.size).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn num_cells(&self) -> usize {
        self.weights.len()
    }

    pub fn has_variable(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v.name == name)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| ProbError::UnknownVariable(name.to_string()))
    }

    /// Axis positions of `names`, in the order given.
    pub fn axes<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let mut seen = HashSet::new();
        names
            .iter()
            .map(|n| {
                let n = n.as_ref();
                if !seen.insert(n) {
                    return Err(ProbError::DuplicateVariable(n.to_string()));
                }
                self.index_of(n)
            })
            .collect()
    }

    pub fn variable(&self, name: &str) -> Result<&Variable> {
        Ok(&self.vars[self.index_of(name)?])
    }

    pub fn cell_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn prob(&self, tuple: &[usize]) -> f64 {
        self.weights[self.cell_index(tuple)]
    }

    /// Marginal weights over `axes`, laid out row-major in the given order.
    pub(crate) fn marginal_weights(&self, axes: &[usize]) -> Vec<f64> {
        let n = self.vars.len();
        let sizes = self.sizes();
        let mut mstride = vec![0usize; n];
        let mut total = 1usize;
        for &a in axes.iter().rev() {
            mstride[a] = total;
            total *= sizes[a];
        }
        let mut out = vec![0.0; total];
        let mut idx = vec![0usize; n];
        let mut m = 0usize;
        for &w in &self.weights {
            out[m] += w;
            for ax in (0..n).rev() {
                idx[ax] += 1;
                m += mstride[ax];
                if idx[ax] < sizes[ax] {
                    break;
                }
                m -= mstride[ax] * sizes[ax];
                idx[ax] = 0;
            }
        }
        out
    }

    /// Marginal over `keep`, with variables in the order they appear in `self`.
    pub fn marginalize<S: AsRef<str>>(&self, keep: &[S]) -> Result<JointPmf> {
        let mut axes = self.axes(keep)?;
        axes.sort_unstable();
        Ok(self.marginal_on_axes(&axes))
    }

    /// Marginal over `names`, with variables in the order given.
    pub fn reorder<S: AsRef<str>>(&self, names: &[S]) -> Result<JointPmf> {
        let axes = self.axes(names)?;
        Ok(self.marginal_on_axes(&axes))
    }

    fn marginal_on_axes(&self, axes: &[usize]) -> JointPmf {
        let vars: Vec<Variable> = axes.iter().map(|&a| self.vars[a].clone()).collect();
        let sizes: Vec<usize> = vars.iter().map(|v| v.size).collect();
        JointPmf {
            weights: self.marginal_weights(axes),
            strides: strides_of(&sizes),
            vars,
        }
    }

    /// Independent product `self x other`; variable names must be disjoint.
    pub fn product(&self, other: &JointPmf) -> Result<JointPmf> {
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        check_variables(&vars)?;
        let mut weights = Vec::with_capacity(self.weights.len() * other.weights.len());
        for &a in &self.weights {
            for &b in &other.weights {
                weights.push(a * b);
            }
        }
        let sizes: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok(JointPmf {
            strides: strides_of(&sizes),
            vars,
            weights,
        })
    }

    /// Appends the outputs of `kernel`, whose conditioning variables must all
    /// be present in `self`. The result is `p(self) p(outputs | given)`.
    pub fn compose(&self, kernel: &ConditionalPmf) -> Result<JointPmf> {
        let given_axes = self.axes(
            &kernel
                .given()
                .iter()
                .map(|v| v.name.as_str())
                .collect::<Vec<_>>(),
        )?;
        for (&a, v) in given_axes.iter().zip(kernel.given()) {
            if self.vars[a].size != v.size {
                return Err(ProbError::InvalidArgument(format!(
                    "kernel expects `{}` with size {}, found size {}",
                    v.name, v.size, self.vars[a].size
                )));
            }
        }
        let mut vars = self.vars.clone();
        vars.extend(kernel.outputs().iter().cloned());
        check_variables(&vars)?;

        let out_cells = kernel.output_cells();
        let gstrides = kernel.given_strides();
        let sizes = self.sizes();
        let mut weights = vec![0.0; self.weights.len() * out_cells];
        let mut idx = vec![0usize; sizes.len()];
        for (cell, &w) in self.weights.iter().enumerate() {
            if w > 0.0 {
                let row: usize = given_axes
                    .iter()
                    .zip(&gstrides)
                    .map(|(&a, s)| idx[a] * s)
                    .sum();
                let dst = &mut weights[cell * out_cells..(cell + 1) * out_cells];
                for (d, k) in dst.iter_mut().zip(kernel.row(row)) {
                    *d = w * k;
                }
            }
            advance(&mut idx, &sizes);
        }
        let all_sizes: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok(JointPmf {
            strides: strides_of(&all_sizes),
            vars,
            weights,
        })
    }

    /// Appends a variable that is a deterministic function of `inputs`.
    pub fn with_function<S: AsRef<str>>(
        &self,
        name: &str,
        size: usize,
        inputs: &[S],
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<JointPmf> {
        let given: Vec<Variable> = self
            .axes(inputs)?
            .iter()
            .map(|&a| self.vars[a].clone())
            .collect();
        let kernel = ConditionalPmf::deterministic(given, Variable::new(name, size), f)?;
        self.compose(&kernel)
    }

    /// The kernel `p(outputs | given)` extracted from this joint. Rows whose
    /// conditioning tuple has zero probability are set to uniform.
    pub fn conditional<S: AsRef<str>, T: AsRef<str>>(
        &self,
        outputs: &[S],
        given: &[T],
    ) -> Result<ConditionalPmf> {
        let g_axes = self.axes(given)?;
        let o_axes = self.axes(outputs)?;
        if let Some(a) = g_axes.iter().find(|a| o_axes.contains(a)) {
            return Err(ProbError::DuplicateVariable(self.vars[*a].name.clone()));
        }
        let mut all = g_axes.clone();
        all.extend(&o_axes);
        let joint = self.marginal_weights(&all);
        let out_cells: usize = o_axes.iter().map(|&a| self.vars[a].size).product();
        let mut kernel = Vec::with_capacity(joint.len());
        for row in joint.chunks(out_cells) {
            let mass: f64 = row.iter().sum();
            if mass > 0.0 {
                kernel.extend(row.iter().map(|w| w / mass));
            } else {
                kernel.extend(std::iter::repeat_n(1.0 / out_cells as f64, out_cells));
            }
        }
        ConditionalPmf::new(
            g_axes.iter().map(|&a| self.vars[a].clone()).collect(),
            o_axes.iter().map(|&a| self.vars[a].clone()).collect(),
            kernel,
        )
    }

    /// Total-variation distance to a pmf over the same variables in the same
    /// order.
    pub fn total_variation(&self, other: &JointPmf) -> Result<f64> {
        if self.vars != other.vars {
            return Err(ProbError::InvalidArgument(
                "total variation needs identical variable lists".into(),
            ));
        }
        Ok(0.5
            * self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }

    /// Renames one variable.
    pub fn rename(mut self, from: &str, to: &str) -> Result<JointPmf> {
        let i = self.index_of(from)?;
        self.vars[i].name = to.to_string();
        check_variables(&self.vars)?;
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pmf serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<JointPmf> {
        serde_json::from_str(text).map_err(|e| ProbError::InvalidArgument(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct VariableWire {
    name: String,
    size: usize,
    /// When present, the role replaces the name as the identifier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    role: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct PmfWire {
    variables: Vec<VariableWire>,
    weights: Vec<f64>,
}

impl Serialize for JointPmf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PmfWire {
            variables: self
                .vars
                .iter()
                .map(|v| VariableWire {
                    name: v.name.clone(),
                    size: v.size,
                    role: None,
                })
                .collect(),
            weights: self.weights.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JointPmf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PmfWire::deserialize(d)?;
        let vars = wire
            .variables
            .into_iter()
            .map(|v| Variable::new(v.role.unwrap_or(v.name), v.size))
            .collect();
        JointPmf::new(vars, wire.weights).map_err(serde::de::Error::custom)
    }
}
