#![allow(dead_code)]

use marc_core::{ConditionalPmf, JointPmf, Variable};
use marc_rates::model::{Q, S1, S2, V1, V2, W, W3, X1, X2, X3};
use marc_rates::{CpmInputA, CpmInputB, DmChannel, SeparationInput, SourceSideInfoModel};

pub fn pair(weights: [f64; 4]) -> SourceSideInfoModel {
    let p = JointPmf::normalized(
        vec![Variable::new(S1, 2), Variable::new(S2, 2)],
        weights.to_vec(),
    )
    .unwrap();
    SourceSideInfoModel::without_side_info(&p).unwrap()
}

/// Two copies of one uniform bit.
pub fn identical_bits() -> SourceSideInfoModel {
    pair([0.5, 0.0, 0.0, 0.5])
}

pub fn independent_bits() -> SourceSideInfoModel {
    pair([0.25; 4])
}

/// Single-letter sources: nothing to send.
pub fn constant_sources() -> SourceSideInfoModel {
    let p = JointPmf::point(
        vec![
            Variable::new(S1, 1),
            Variable::new(S2, 1),
            Variable::new(W, 1),
            Variable::new(W3, 1),
        ],
        &[0, 0, 0, 0],
    )
    .unwrap();
    SourceSideInfoModel::new(p).unwrap()
}

/// The relay sees `(X1, X2)` and the destination `(X1, X2, X3)`, all
/// noiseless.
pub fn pipes(x: [usize; 3]) -> DmChannel {
    let [a, b, c] = x;
    DmChannel::deterministic(x, a * b * c, a * b, |[x1, x2, x3]| {
        ((x1 * b + x2) * c + x3, x1 * b + x2)
    })
    .unwrap()
}

pub fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

/// Uniform independent inputs with trivial auxiliaries.
pub fn uniform_separation(x: [usize; 3]) -> SeparationInput {
    SeparationInput::independent(&uniform(x[0]), &uniform(x[1]), &uniform(x[2])).unwrap()
}

/// Instance used for the in-region runs: 8-ary source inputs, a 4-ary relay
/// input, noiseless observations.
pub fn good_separation() -> (SourceSideInfoModel, DmChannel, SeparationInput) {
    (
        identical_bits(),
        pipes([8, 8, 4]),
        uniform_separation([8, 8, 4]),
    )
}

/// Independent uniform bits over a binary adder modulo 2 to the
/// destination; the relay sees both inputs.
pub fn xor_separation() -> (SourceSideInfoModel, DmChannel, SeparationInput) {
    let ch =
        DmChannel::deterministic([2, 2, 1], 2, 4, |[x1, x2, _]| (x1 ^ x2, x1 * 2 + x2)).unwrap();
    (independent_bits(), ch, uniform_separation([2, 2, 1]))
}

/// A noisy channel: every output pair is equally likely whatever the input.
pub fn useless_channel(x: [usize; 3], y: usize, y3: usize) -> DmChannel {
    DmChannel::from_fn(x, y, y3, |_, _, _| 1.0).unwrap()
}

fn bit(name: &str) -> JointPmf {
    JointPmf::uniform(vec![Variable::new(name, 2)]).unwrap()
}

fn unit(name: &str) -> JointPmf {
    JointPmf::point(vec![Variable::new(name, 1)], &[0]).unwrap()
}

/// `X_i = (S_i, C_i)` with a fresh uniform bit `C_i`, uniform binary `V_i`
/// and `X3 = (V1, V2)`.
pub fn cpm_a_input() -> CpmInputA {
    let xi = |x: &str, s: &str, v: &str| {
        ConditionalPmf::from_fn(
            vec![
                Variable::new(s, 2),
                Variable::new(v, 2),
                Variable::new(Q, 1),
            ],
            vec![Variable::new(x, 4)],
            |g, o| if o[0] / 2 == g[0] { 1.0 } else { 0.0 },
        )
        .unwrap()
    };
    let k3 = ConditionalPmf::deterministic(
        vec![Variable::new(V1, 2), Variable::new(V2, 2)],
        Variable::new(X3, 4),
        |g| g[0] * 2 + g[1],
    )
    .unwrap();
    CpmInputA::new(
        unit(Q),
        bit(V1),
        bit(V2),
        xi(X1, S1, V1),
        xi(X2, S2, V2),
        k3,
    )
    .unwrap()
}

/// `X_i = (S_i, two fresh bits)` and `X3 = S1`.
pub fn cpm_b_input() -> CpmInputB {
    let xi = |x: &str, s: &str| {
        ConditionalPmf::from_fn(
            vec![Variable::new(s, 2), Variable::new(Q, 1)],
            vec![Variable::new(x, 8)],
            |g, o| if o[0] / 4 == g[0] { 1.0 } else { 0.0 },
        )
        .unwrap()
    };
    let k3 = ConditionalPmf::deterministic(
        vec![
            Variable::new(S1, 2),
            Variable::new(S2, 2),
            Variable::new(Q, 1),
        ],
        Variable::new(X3, 2),
        |g| g[0],
    )
    .unwrap();
    CpmInputB::new(unit(Q), xi(X1, S1), xi(X2, S2), k3).unwrap()
}

/// Scheme-A inputs for single-letter sources.
pub fn cpm_a_constant_input() -> CpmInputA {
    let xi = |x: &str, s: &str, v: &str| {
        ConditionalPmf::from_fn(
            vec![
                Variable::new(s, 1),
                Variable::new(v, 2),
                Variable::new(Q, 1),
            ],
            vec![Variable::new(x, 4)],
            |_, _| 1.0,
        )
        .unwrap()
    };
    let k3 = ConditionalPmf::deterministic(
        vec![Variable::new(V1, 2), Variable::new(V2, 2)],
        Variable::new(X3, 4),
        |g| g[0] * 2 + g[1],
    )
    .unwrap();
    CpmInputA::new(
        unit(Q),
        bit(V1),
        bit(V2),
        xi(X1, S1, V1),
        xi(X2, S2, V2),
        k3,
    )
    .unwrap()
}

pub fn cpm_b_constant_input() -> CpmInputB {
    let xi = |x: &str, s: &str| {
        ConditionalPmf::from_fn(
            vec![Variable::new(s, 1), Variable::new(Q, 1)],
            vec![Variable::new(x, 8)],
            |_, _| 1.0,
        )
        .unwrap()
    };
    let k3 = ConditionalPmf::constant(
        vec![
            Variable::new(S1, 1),
            Variable::new(S2, 1),
            Variable::new(Q, 1),
        ],
        vec![Variable::new(X3, 2)],
        &[0.5, 0.5],
    )
    .unwrap();
    CpmInputB::new(unit(Q), xi(X1, S1), xi(X2, S2), k3).unwrap()
}
