use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{ProbError, Result};
use crate::pmf::JointPmf;

/// One factor `p(child | given)` of a factorization pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub child: Vec<String>,
    pub given: Vec<String>,
}

impl Factor {
    pub fn new(child: &[&str], given: &[&str]) -> Self {
        Factor {
            child: child.iter().map(|s| s.to_string()).collect(),
            given: given.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl std::fmt::Display for Factor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.given.is_empty() {
            write!(f, "p({})", self.child.join(","))
        } else {
            write!(f, "p({}|{})", self.child.join(","), self.given.join(","))
        }
    }
}

fn check_pattern(pmf: &JointPmf, pattern: &[Factor]) -> Result<()> {
    let mut introduced: HashSet<&str> = HashSet::new();
    for factor in pattern {
        if factor.child.is_empty() {
            return Err(ProbError::MalformedPattern(format!(
                "{factor} has no child"
            )));
        }
        for g in &factor.given {
            pmf.index_of(g)?;
            if !introduced.contains(g.as_str()) {
                return Err(ProbError::MalformedPattern(format!(
                    "{factor} conditions on `{g}` before it is introduced"
                )));
            }
        }
        for c in &factor.child {
            pmf.index_of(c)?;
            if !introduced.insert(c.as_str()) {
                return Err(ProbError::MalformedPattern(format!(
                    "`{c}` is a child twice"
                )));
            }
        }
    }
    if let Some(v) = pmf
        .variables()
        .iter()
        .find(|v| !introduced.contains(v.name.as_str()))
    {
        return Err(ProbError::MalformedPattern(format!(
            "`{}` is not covered",
            v.name
        )));
    }
    Ok(())
}

/// Position of the first factor at which the pmf stops agreeing with the
/// product of its own conditionals, or `None` when the whole pattern holds.
///
/// The pattern is processed in order. After each factor the running product
/// is compared with the pmf's marginal on the variables introduced so far,
/// using total-variation distance.
pub fn factorization_violation(
    pmf: &JointPmf,
    pattern: &[Factor],
    tol: f64,
) -> Result<Option<usize>> {
    check_pattern(pmf, pattern)?;
    let mut partial = JointPmf::unit();
    for (k, factor) in pattern.iter().enumerate() {
        partial = partial.compose(&pmf.conditional(&factor.child, &factor.given)?)?;
        let target = pmf.reorder(&partial.names())?;
        if partial.total_variation(&target)? > tol {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Whether `pmf` equals the product of its conditionals along `pattern`
/// within total-variation distance `tol`.
pub fn validate_factorization(pmf: &JointPmf, pattern: &[Factor], tol: f64) -> Result<bool> {
    Ok(factorization_violation(pmf, pattern, tol)?.is_none())
}
