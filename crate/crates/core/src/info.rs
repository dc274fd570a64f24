use crate::error::{ProbError, Result};
use crate::pmf::JointPmf;

fn plogp_sum(weights: &[f64]) -> f64 {
    -weights
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

fn joint_entropy_axes(pmf: &JointPmf, axes: &[usize]) -> f64 {
    if axes.is_empty() {
        return 0.0;
    }
    let mut sorted = axes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    plogp_sum(&pmf.marginal_weights(&sorted))
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v = a.to_vec();
    v.extend(b.iter().filter(|x| !a.contains(x)));
    v
}

/// `H(target | given)` before clamping; the mutual information uses this so
/// that chain rules hold to rounding.
fn raw_conditional_entropy(pmf: &JointPmf, target: &[usize], given: &[usize]) -> f64 {
    joint_entropy_axes(pmf, &union(target, given)) - joint_entropy_axes(pmf, given)
}

fn disjoint(pmf: &JointPmf, sets: &[&[usize]]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if let Some(x) = a.iter().find(|x| b.contains(x)) {
                return Err(ProbError::InvalidArgument(format!(
                    "variable `{}` appears in two argument sets",
                    pmf.variables()[*x].name
                )));
            }
        }
    }
    Ok(())
}

/// Conditional entropy `H(target | given)` in bits. An empty `target`
/// gives zero.
pub fn entropy<S: AsRef<str>, T: AsRef<str>>(
    pmf: &JointPmf,
    target: &[S],
    given: &[T],
) -> Result<f64> {
    let t = pmf.axes(target)?;
    let g = pmf.axes(given)?;
    disjoint(pmf, &[&t, &g])?;
    Ok(raw_conditional_entropy(pmf, &t, &g).max(0.0))
}

/// Conditional mutual information `I(a; b | given)` in bits, computed as
/// `H(a | given) - H(a | b, given)`.
pub fn mutual_information<S: AsRef<str>, T: AsRef<str>, U: AsRef<str>>(
    pmf: &JointPmf,
    a: &[S],
    b: &[T],
    given: &[U],
) -> Result<f64> {
    let a = pmf.axes(a)?;
    let b = pmf.axes(b)?;
    let g = pmf.axes(given)?;
    disjoint(pmf, &[&a, &b, &g])?;
    Ok(raw_conditional_entropy(pmf, &a, &g) - raw_conditional_entropy(pmf, &a, &union(&b, &g)))
}

/// Whether `x - y - z` is a Markov chain, tested as `I(x; z | y) <= tol`.
pub fn is_markov_chain<S: AsRef<str>, T: AsRef<str>, U: AsRef<str>>(
    pmf: &JointPmf,
    x: &[S],
    y: &[T],
    z: &[U],
    tol: f64,
) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(ProbError::InvalidArgument(format!(
            "tolerance {tol} must be >= 0"
        )));
    }
    Ok(mutual_information(pmf, x, z, y)? <= tol)
}
