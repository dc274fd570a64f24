//! Gács–Körner common part of a pair of sources.
//!
//! Symbols of the two sources are the nodes of a bipartite graph with an edge
//! wherever the joint probability is positive. The common variable `T` is the
//! index of the connected component, which both terminals can compute from
//! their own symbol alone.

use serde::{Deserialize, Serialize};

use crate::error::{ProbError, Result};
use crate::pmf::JointPmf;

/// The two labelling maps and the size of the common alphabet.
///
/// Symbols with zero marginal probability belong to no component and are
/// mapped to label 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommonPart {
    pub h1: Vec<usize>,
    pub h2: Vec<usize>,
    pub t_size: usize,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Computes the common part of a joint pmf over exactly two variables.
///
/// Components are labelled in the order they are first met while scanning
/// the support in row-major order.
pub fn gacs_korner_common_part(pmf: &JointPmf) -> Result<CommonPart> {
    let sizes = pmf.sizes();
    if sizes.len() != 2 {
        return Err(ProbError::InvalidArgument(format!(
            "common part needs exactly two variables, got {}",
            sizes.len()
        )));
    }
    let (n1, n2) = (sizes[0], sizes[1]);
    let mut parent: Vec<usize> = (0..n1 + n2).collect();
    for a in 0..n1 {
        for b in 0..n2 {
            if pmf.weights()[a * n2 + b] > 0.0 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, n1 + b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }

    let mut label_of_root = vec![usize::MAX; n1 + n2];
    let mut next = 0;
    let mut h1 = vec![0; n1];
    let mut h2 = vec![0; n2];
    for a in 0..n1 {
        for b in 0..n2 {
            if pmf.weights()[a * n2 + b] > 0.0 {
                let root = find(&mut parent, a);
                if label_of_root[root] == usize::MAX {
                    label_of_root[root] = next;
                    next += 1;
                }
                h1[a] = label_of_root[root];
                h2[b] = label_of_root[root];
            }
        }
    }
    Ok(CommonPart {
        h1,
        h2,
        t_size: next,
    })
}
