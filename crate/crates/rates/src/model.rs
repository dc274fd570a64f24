//! Sources, channels and the input distributions each theorem ranges over.

use marc_core::{
    entropy, factorization_violation, gacs_korner_common_part, CommonPart, ConditionalPmf, Factor,
    JointPmf, Variable,
};
use serde::{Deserialize, Serialize};

use crate::error::{RateError, Result};

pub const S1: &str = "S1";
pub const S2: &str = "S2";
pub const W: &str = "W";
pub const W3: &str = "W3";
pub const T: &str = "T";
pub const Q: &str = "Q";
pub const V: &str = "V";
pub const V1: &str = "V1";
pub const V2: &str = "V2";
pub const X1: &str = "X1";
pub const X2: &str = "X2";
pub const X3: &str = "X3";
pub const Y: &str = "Y";
pub const Y3: &str = "Y3";

/// Total-variation tolerance used when validating an input factorization.
pub const FACTORIZATION_TOL: f64 = 1e-10;

pub(crate) fn check_factorization(joint: &JointPmf, pattern: &[Factor]) -> Result<()> {
    match factorization_violation(joint, pattern, FACTORIZATION_TOL)? {
        None => Ok(()),
        Some(k) => Err(RateError::Factorization {
            factor: pattern[k].to_string(),
        }),
    }
}

fn expect_names(found: &[Variable], expected: &[&str], what: &str) -> Result<()> {
    let names: Vec<&str> = found.iter().map(|v| v.name.as_str()).collect();
    if names != expected {
        return Err(RateError::InvalidInput(format!(
            "{what} must be over {expected:?}, found {names:?}"
        )));
    }
    Ok(())
}

/// The joint law `p(s1, s2, w, w3)` of the two sources and the side
/// information at the destination (`W`) and at the relay (`W3`).
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSideInfoModel {
    joint: JointPmf,
}

impl SourceSideInfoModel {
    /// Accepts a pmf over exactly `S1, S2, W, W3` in any order.
    pub fn new(joint: JointPmf) -> Result<Self> {
        if joint.variables().len() != 4 {
            return Err(RateError::InvalidModel(format!(
                "expected variables S1, S2, W, W3, found {:?}",
                joint.names()
            )));
        }
        let joint = joint
            .reorder(&[S1, S2, W, W3])
            .map_err(|e| RateError::InvalidModel(e.to_string()))?;
        Ok(SourceSideInfoModel { joint })
    }

    /// Model without side information: `W` and `W3` are constants.
    pub fn without_side_info(sources: &JointPmf) -> Result<Self> {
        let s = sources.reorder(&[S1, S2])?;
        Self::new(s.product(&JointPmf::point(
            vec![Variable::new(W, 1), Variable::new(W3, 1)],
            &[0, 0],
        )?)?)
    }

    pub fn joint(&self) -> &JointPmf {
        &self.joint
    }

    pub fn size(&self, name: &str) -> usize {
        self.joint.variable(name).map(|v| v.size).unwrap_or(0)
    }

    /// `H(target | given)` of the source model, in bits.
    pub fn h(&self, target: &[&str], given: &[&str]) -> f64 {
        entropy(&self.joint, target, given).expect("source variables are fixed")
    }

    pub fn common_part(&self) -> CommonPart {
        let pair = self
            .joint
            .marginalize(&[S1, S2])
            .expect("source variables are fixed");
        gacs_korner_common_part(&pair).expect("pair pmf has two variables")
    }

    /// The source joint with the common part `T` appended as a variable.
    pub fn joint_with_common_part(&self) -> Result<(JointPmf, CommonPart)> {
        let cp = self.common_part();
        let h1 = cp.h1.clone();
        let joint = self
            .joint
            .with_function(T, cp.t_size.max(1), &[S1], |s| h1[s[0]])?;
        Ok((joint, cp))
    }
}

impl Serialize for SourceSideInfoModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.joint.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SourceSideInfoModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let joint = JointPmf::deserialize(d)?;
        SourceSideInfoModel::new(joint).map_err(serde::de::Error::custom)
    }
}

/// A memoryless MARC `p(y, y3 | x1, x2, x3)`.
///
/// The kernels to each receiver alone are cached, since most conditions
/// involve only one of the two outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct DmChannel {
    law: ConditionalPmf,
    to_destination: ConditionalPmf,
    to_relay: ConditionalPmf,
}

impl DmChannel {
    pub fn new(law: ConditionalPmf) -> Result<Self> {
        expect_names(law.given(), &[X1, X2, X3], "channel inputs")?;
        expect_names(law.outputs(), &[Y, Y3], "channel outputs")?;
        let ny = law.outputs()[0].size;
        let ny3 = law.outputs()[1].size;
        let rows = law.num_rows();
        let mut dest = Vec::with_capacity(rows * ny);
        let mut relay = Vec::with_capacity(rows * ny3);
        for r in 0..rows {
            let row = law.row(r);
            for y in 0..ny {
                dest.push(row[y * ny3..(y + 1) * ny3].iter().sum::<f64>());
            }
            for y3 in 0..ny3 {
                relay.push((0..ny).map(|y| row[y * ny3 + y3]).sum::<f64>());
            }
        }
        let to_destination =
            ConditionalPmf::normalized(law.given().to_vec(), vec![law.outputs()[0].clone()], dest)?;
        let to_relay = ConditionalPmf::normalized(
            law.given().to_vec(),
            vec![law.outputs()[1].clone()],
            relay,
        )?;
        Ok(DmChannel {
            law,
            to_destination,
            to_relay,
        })
    }

    fn input_vars(x: [usize; 3]) -> Vec<Variable> {
        vec![
            Variable::new(X1, x[0]),
            Variable::new(X2, x[1]),
            Variable::new(X3, x[2]),
        ]
    }

    /// Channel from a transition function `f(x, y, y3)`; rows are normalized.
    pub fn from_fn(
        x: [usize; 3],
        y: usize,
        y3: usize,
        f: impl Fn([usize; 3], usize, usize) -> f64,
    ) -> Result<Self> {
        let law = ConditionalPmf::from_fn(
            Self::input_vars(x),
            vec![Variable::new(Y, y), Variable::new(Y3, y3)],
            |g, o| f([g[0], g[1], g[2]], o[0], o[1]),
        )?;
        Self::new(law)
    }

    /// Noiseless channel whose outputs are fixed functions of the inputs.
    pub fn deterministic(
        x: [usize; 3],
        y: usize,
        y3: usize,
        f: impl Fn([usize; 3]) -> (usize, usize),
    ) -> Result<Self> {
        Self::from_fn(x, y, y3, |xs, a, b| if f(xs) == (a, b) { 1.0 } else { 0.0 })
    }

    pub fn law(&self) -> &ConditionalPmf {
        &self.law
    }

    pub fn to_destination(&self) -> &ConditionalPmf {
        &self.to_destination
    }

    pub fn to_relay(&self) -> &ConditionalPmf {
        &self.to_relay
    }

    pub fn input_sizes(&self) -> [usize; 3] {
        let g = self.law.given();
        [g[0].size, g[1].size, g[2].size]
    }

    pub fn output_sizes(&self) -> (usize, usize) {
        let o = self.law.outputs();
        (o[0].size, o[1].size)
    }
}

impl Serialize for DmChannel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.law.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DmChannel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let law = ConditionalPmf::deserialize(d)?;
        DmChannel::new(law).map_err(serde::de::Error::custom)
    }
}

fn check_marginal(p: &JointPmf, name: &str) -> Result<()> {
    expect_names(p.variables(), &[name], &format!("marginal of {name}"))
}

fn check_kernel(k: &ConditionalPmf, output: &str, given: &[&str]) -> Result<()> {
    expect_names(k.outputs(), &[output], &format!("kernel for {output}"))?;
    expect_names(k.given(), given, &format!("conditioning of {output}"))
}

/// Inputs for the separation-based scheme:
/// `p(v1) p(x1|v1) p(v2) p(x2|v2) p(x3|v1,v2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationInput {
    pub p_v1: JointPmf,
    pub p_v2: JointPmf,
    pub k_x1: ConditionalPmf,
    pub k_x2: ConditionalPmf,
    pub k_x3: ConditionalPmf,
}

impl SeparationInput {
    pub fn new(
        p_v1: JointPmf,
        p_v2: JointPmf,
        k_x1: ConditionalPmf,
        k_x2: ConditionalPmf,
        k_x3: ConditionalPmf,
    ) -> Result<Self> {
        let s = SeparationInput {
            p_v1,
            p_v2,
            k_x1,
            k_x2,
            k_x3,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_marginal(&self.p_v1, V1)?;
        check_marginal(&self.p_v2, V2)?;
        check_kernel(&self.k_x1, X1, &[V1])?;
        check_kernel(&self.k_x2, X2, &[V2])?;
        check_kernel(&self.k_x3, X3, &[V1, V2])?;
        check_factorization(&self.joint()?, &Self::pattern())
    }

    /// Inputs with trivial auxiliaries: `p(x1) p(x2) p(x3)`.
    pub fn independent(p_x1: &[f64], p_x2: &[f64], p_x3: &[f64]) -> Result<Self> {
        let unit = |n: &str| JointPmf::point(vec![Variable::new(n, 1)], &[0]);
        let k = |out: &str, given: &[&str], p: &[f64]| {
            ConditionalPmf::constant(
                given.iter().map(|g| Variable::new(*g, 1)).collect(),
                vec![Variable::new(out, p.len())],
                p,
            )
        };
        Self::new(
            unit(V1)?,
            unit(V2)?,
            k(X1, &[V1], p_x1)?,
            k(X2, &[V2], p_x2)?,
            k(X3, &[V1, V2], p_x3)?,
        )
    }

    pub fn pattern() -> Vec<Factor> {
        vec![
            Factor::new(&[V1], &[]),
            Factor::new(&[X1], &[V1]),
            Factor::new(&[V2], &[]),
            Factor::new(&[X2], &[V2]),
            Factor::new(&[X3], &[V1, V2]),
        ]
    }

    /// Joint over `V1, X1, V2, X2, X3`.
    pub fn joint(&self) -> Result<JointPmf> {
        Ok(self
            .p_v1
            .compose(&self.k_x1)?
            .product(&self.p_v2)?
            .compose(&self.k_x2)?
            .compose(&self.k_x3)?)
    }

    /// Recovers the factors from a joint over `V1, V2, X1, X2, X3`, failing
    /// with the first violated factor when the joint does not factorize.
    pub fn from_joint(joint: &JointPmf) -> Result<Self> {
        check_factorization(joint, &Self::pattern())?;
        Self::new(
            joint.marginalize(&[V1])?,
            joint.marginalize(&[V2])?,
            joint.conditional(&[X1], &[V1])?,
            joint.conditional(&[X2], &[V2])?,
            joint.conditional(&[X3], &[V1, V2])?,
        )
    }
}

/// Inputs for the first joint source-channel scheme:
/// `p(q) p(v1) p(x1|s1,v1,q) p(v2) p(x2|s2,v2,q) p(x3|v1,v2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpmInputA {
    pub p_q: JointPmf,
    pub p_v1: JointPmf,
    pub p_v2: JointPmf,
    pub k_x1: ConditionalPmf,
    pub k_x2: ConditionalPmf,
    pub k_x3: ConditionalPmf,
}

impl CpmInputA {
    pub fn new(
        p_q: JointPmf,
        p_v1: JointPmf,
        p_v2: JointPmf,
        k_x1: ConditionalPmf,
        k_x2: ConditionalPmf,
        k_x3: ConditionalPmf,
    ) -> Result<Self> {
        let s = CpmInputA {
            p_q,
            p_v1,
            p_v2,
            k_x1,
            k_x2,
            k_x3,
        };
        s.check_shapes()?;
        Ok(s)
    }

    fn check_shapes(&self) -> Result<()> {
        check_marginal(&self.p_q, Q)?;
        check_marginal(&self.p_v1, V1)?;
        check_marginal(&self.p_v2, V2)?;
        check_kernel(&self.k_x1, X1, &[S1, V1, Q])?;
        check_kernel(&self.k_x2, X2, &[S2, V2, Q])?;
        check_kernel(&self.k_x3, X3, &[V1, V2])
    }

    pub fn pattern() -> Vec<Factor> {
        vec![
            Factor::new(&[S1, S2, W, W3], &[]),
            Factor::new(&[T], &[S1]),
            Factor::new(&[Q], &[]),
            Factor::new(&[V1], &[]),
            Factor::new(&[X1], &[S1, V1, Q]),
            Factor::new(&[V2], &[]),
            Factor::new(&[X2], &[S2, V2, Q]),
            Factor::new(&[X3], &[V1, V2]),
        ]
    }

    /// Joint over sources, `T`, `Q`, auxiliaries and channel inputs.
    pub fn joint(&self, model: &SourceSideInfoModel) -> Result<JointPmf> {
        self.check_shapes()?;
        let (src, _) = model.joint_with_common_part()?;
        let joint = src
            .product(&self.p_q)?
            .product(&self.p_v1)?
            .compose(&self.k_x1)?
            .product(&self.p_v2)?
            .compose(&self.k_x2)?
            .compose(&self.k_x3)?;
        check_factorization(&joint, &Self::pattern())?;
        Ok(joint)
    }
}

/// Inputs for the second joint source-channel scheme:
/// `p(q) p(x1|s1,q) p(x2|s2,q) p(x3|s1,s2,q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpmInputB {
    pub p_q: JointPmf,
    pub k_x1: ConditionalPmf,
    pub k_x2: ConditionalPmf,
    pub k_x3: ConditionalPmf,
}

impl CpmInputB {
    pub fn new(
        p_q: JointPmf,
        k_x1: ConditionalPmf,
        k_x2: ConditionalPmf,
        k_x3: ConditionalPmf,
    ) -> Result<Self> {
        let s = CpmInputB {
            p_q,
            k_x1,
            k_x2,
            k_x3,
        };
        s.check_shapes()?;
        Ok(s)
    }

    fn check_shapes(&self) -> Result<()> {
        check_marginal(&self.p_q, Q)?;
        check_kernel(&self.k_x1, X1, &[S1, Q])?;
        check_kernel(&self.k_x2, X2, &[S2, Q])?;
        check_kernel(&self.k_x3, X3, &[S1, S2, Q])
    }

    pub fn pattern() -> Vec<Factor> {
        vec![
            Factor::new(&[S1, S2, W, W3], &[]),
            Factor::new(&[T], &[S1]),
            Factor::new(&[Q], &[]),
            Factor::new(&[X1], &[S1, Q]),
            Factor::new(&[X2], &[S2, Q]),
            Factor::new(&[X3], &[S1, S2, Q]),
        ]
    }

    pub fn joint(&self, model: &SourceSideInfoModel) -> Result<JointPmf> {
        self.check_shapes()?;
        let (src, _) = model.joint_with_common_part()?;
        let joint = src
            .product(&self.p_q)?
            .compose(&self.k_x1)?
            .compose(&self.k_x2)?
            .compose(&self.k_x3)?;
        check_factorization(&joint, &Self::pattern())?;
        Ok(joint)
    }
}

/// Inputs for the cooperative relay broadcast channel: an arbitrary
/// `p(x1, x3)`, with the relay codeword playing the role of `V1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrbcInput {
    pub p_x1x3: JointPmf,
}

impl CrbcInput {
    pub fn new(p_x1x3: JointPmf) -> Result<Self> {
        let p_x1x3 = p_x1x3
            .reorder(&[X1, X3])
            .map_err(|e| RateError::InvalidInput(e.to_string()))?;
        Ok(CrbcInput { p_x1x3 })
    }

    /// Joint over `X1, X3, X2` with `X2` pinned to its only symbol.
    pub(crate) fn joint(&self) -> Result<JointPmf> {
        Ok(self.p_x1x3.with_function(X2, 1, &[X1], |_| 0)?)
    }
}
