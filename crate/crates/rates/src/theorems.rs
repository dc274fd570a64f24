//! Checkers for the achievability and converse theorems.
//!
//! Each checker evaluates the stated inequalities on the joint distribution
//! induced by the model, the channel and the chosen input distribution, and
//! returns a [`ConditionReport`] with stable condition labels.

use marc_core::{mutual_information, JointPmf};

use crate::error::{RateError, Result};
use crate::model::*;
use crate::report::{Condition, ConditionKind, ConditionReport, ZERO_ENTROPY};
use crate::search::{maximize_mi, InputFamily, MiProblem, Objective, SearchConfig};

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(RateError::InvalidInput(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    Ok(())
}

fn mi(joint: &JointPmf, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
    Ok(mutual_information(joint, a, b, given)?)
}

fn h(joint: &JointPmf, target: &[&str], given: &[&str]) -> Result<f64> {
    Ok(marc_core::entropy(joint, target, given)?)
}

fn strict(label: &str, expr: &str, lhs: f64, rhs: f64) -> Condition {
    Condition::new(label, expr, ConditionKind::Achievability, lhs, rhs)
}

/// Separation-based achievability: six strict conditions on the source
/// entropies against `kappa` times the channel mutual informations.
pub fn check_thm1(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    input: &SeparationInput,
    kappa: f64,
) -> Result<ConditionReport> {
    check_kappa(kappa)?;
    input.validate()?;
    let inputs = input.joint()?;
    let relay = inputs.compose(ch.to_relay())?;
    let dest = inputs.compose(ch.to_destination())?;
    let k = kappa;
    let conditions = vec![
        strict(
            "thm1.rly.S1",
            "H(S1|S2,W3) < k I(X1;Y3|V1,X2,X3)",
            model.h(&[S1], &[S2, W3]),
            k * mi(&relay, &[X1], &[Y3], &[V1, X2, X3])?,
        ),
        strict(
            "thm1.rly.S2",
            "H(S2|S1,W3) < k I(X2;Y3|V2,X1,X3)",
            model.h(&[S2], &[S1, W3]),
            k * mi(&relay, &[X2], &[Y3], &[V2, X1, X3])?,
        ),
        strict(
            "thm1.rly.S1S2",
            "H(S1,S2|W3) < k I(X1,X2;Y3|V1,V2,X3)",
            model.h(&[S1, S2], &[W3]),
            k * mi(&relay, &[X1, X2], &[Y3], &[V1, V2, X3])?,
        ),
        strict(
            "thm1.dst.S1",
            "H(S1|S2,W) < k I(X1,X3;Y|V2,X2)",
            model.h(&[S1], &[S2, W]),
            k * mi(&dest, &[X1, X3], &[Y], &[V2, X2])?,
        ),
        strict(
            "thm1.dst.S2",
            "H(S2|S1,W) < k I(X2,X3;Y|V1,X1)",
            model.h(&[S2], &[S1, W]),
            k * mi(&dest, &[X2, X3], &[Y], &[V1, X1])?,
        ),
        strict(
            "thm1.dst.S1S2",
            "H(S1,S2|W) < k I(X1,X2,X3;Y)",
            model.h(&[S1, S2], &[W]),
            k * mi(&dest, &[X1, X2, X3], &[Y], &[])?,
        ),
    ];
    Ok(ConditionReport::new("thm1", kappa, conditions))
}

/// Achievability for the cooperative relay broadcast channel, where only
/// the first source is present.
pub fn check_crbc(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    input: &CrbcInput,
    kappa: f64,
) -> Result<ConditionReport> {
    check_kappa(kappa)?;
    if model.h(&[S2], &[]) > ZERO_ENTROPY {
        return Err(RateError::InvalidModel(
            "the relay broadcast channel needs a degenerate second source".into(),
        ));
    }
    if ch.input_sizes()[1] != 1 {
        return Err(RateError::InvalidModel(
            "the relay broadcast channel needs a single-letter X2 alphabet".into(),
        ));
    }
    let inputs = input.joint()?;
    let relay = inputs.compose(ch.to_relay())?;
    let dest = inputs.compose(ch.to_destination())?;
    let conditions = vec![
        strict(
            "crbc.rly",
            "H(S1|W3) < k I(X1;Y3|X3)",
            model.h(&[S1], &[W3]),
            kappa * mi(&relay, &[X1], &[Y3], &[X3])?,
        ),
        strict(
            "crbc.dst",
            "H(S1|W) < k I(X1,X3;Y)",
            model.h(&[S1], &[W]),
            kappa * mi(&dest, &[X1, X3], &[Y], &[])?,
        ),
    ];
    Ok(ConditionReport::new("crbc", kappa, conditions))
}

/// Joint source-channel achievability at `kappa = 1` with the common part
/// conveyed through `Q` and superposition over `V1, V2`.
pub fn check_thm6_cpm(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    input: &CpmInputA,
) -> Result<ConditionReport> {
    let joint = input.joint(model)?;
    let relay = joint.compose(ch.to_relay())?;
    let dest = joint.compose(ch.to_destination())?;
    let conditions = vec![
        strict(
            "thm6.rly.S1",
            "H(S1|S2,W3) < I(X1;Y3|S2,V1,X2,X3,W3,Q)",
            h(&joint, &[S1], &[S2, W3])?,
            mi(&relay, &[X1], &[Y3], &[S2, V1, X2, X3, W3, Q])?,
        ),
        strict(
            "thm6.rly.S2",
            "H(S2|S1,W3) < I(X2;Y3|S1,V2,X1,X3,W3,Q)",
            h(&joint, &[S2], &[S1, W3])?,
            mi(&relay, &[X2], &[Y3], &[S1, V2, X1, X3, W3, Q])?,
        ),
        strict(
            "thm6.rly.S1S2.T",
            "H(S1,S2|W3,T) < I(X1,X2;Y3|V1,V2,X3,W3,T,Q)",
            h(&joint, &[S1, S2], &[W3, T])?,
            mi(&relay, &[X1, X2], &[Y3], &[V1, V2, X3, W3, T, Q])?,
        ),
        strict(
            "thm6.rly.S1S2",
            "H(S1,S2|W3) < I(X1,X2;Y3|V1,V2,X3,W3)",
            h(&joint, &[S1, S2], &[W3])?,
            mi(&relay, &[X1, X2], &[Y3], &[V1, V2, X3, W3])?,
        ),
        strict(
            "thm6.dst.S1",
            "H(S1|S2,W) < I(X1,X3;Y|S1,V2,X2,Q)",
            h(&joint, &[S1], &[S2, W])?,
            mi(&dest, &[X1, X3], &[Y], &[S1, V2, X2, Q])?,
        ),
        strict(
            "thm6.dst.S2",
            "H(S2|S1,W) < I(X2,X3;Y|S2,V1,X1,Q)",
            h(&joint, &[S2], &[S1, W])?,
            mi(&dest, &[X2, X3], &[Y], &[S2, V1, X1, Q])?,
        ),
        strict(
            "thm6.dst.S1S2",
            "H(S1,S2|W) < I(X1,X2,X3;Y|S1,S2,Q)",
            h(&joint, &[S1, S2], &[W])?,
            mi(&dest, &[X1, X2, X3], &[Y], &[S1, S2, Q])?,
        ),
    ];
    Ok(ConditionReport::new("thm6", 1.0, conditions))
}

/// Joint source-channel achievability at `kappa = 1` where the relay sends
/// a codeword of the previous block's source pair.
pub fn check_thm7_cpm(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    input: &CpmInputB,
) -> Result<ConditionReport> {
    let joint = input.joint(model)?;
    let relay = joint.compose(ch.to_relay())?;
    let dest = joint.compose(ch.to_destination())?;
    let conditions = vec![
        strict(
            "thm7.rly.S1",
            "H(S1|S2,W3) < I(X1;Y3|S1,X2,X3,Q)",
            h(&joint, &[S1], &[S2, W3])?,
            mi(&relay, &[X1], &[Y3], &[S1, X2, X3, Q])?,
        ),
        strict(
            "thm7.rly.S2",
            "H(S2|S1,W3) < I(X2;Y3|S2,X1,X3,Q)",
            h(&joint, &[S2], &[S1, W3])?,
            mi(&relay, &[X2], &[Y3], &[S2, X1, X3, Q])?,
        ),
        strict(
            "thm7.rly.S1S2",
            "H(S1,S2|W3) < I(X1,X2;Y3|S1,S2,X3,Q)",
            h(&joint, &[S1, S2], &[W3])?,
            mi(&relay, &[X1, X2], &[Y3], &[S1, S2, X3, Q])?,
        ),
        strict(
            "thm7.dst.S1",
            "H(S1|S2,W) < I(X1,X3;Y|S2,X2,W,Q)",
            h(&joint, &[S1], &[S2, W])?,
            mi(&dest, &[X1, X3], &[Y], &[S2, X2, W, Q])?,
        ),
        strict(
            "thm7.dst.S2",
            "H(S2|S1,W) < I(X2,X3;Y|S1,X1,W,Q)",
            h(&joint, &[S2], &[S1, W])?,
            mi(&dest, &[X2, X3], &[Y], &[S1, X1, W, Q])?,
        ),
        strict(
            "thm7.dst.S1S2.T",
            "H(S1,S2|W,T) < I(X1,X2,X3;Y|W,T,Q)",
            h(&joint, &[S1, S2], &[W, T])?,
            mi(&dest, &[X1, X2, X3], &[Y], &[W, T, Q])?,
        ),
        strict(
            "thm7.dst.S1S2",
            "H(S1,S2|W) < I(X1,X2,X3;Y|W)",
            h(&joint, &[S1, S2], &[W])?,
            mi(&dest, &[X1, X2, X3], &[Y], &[W])?,
        ),
    ];
    Ok(ConditionReport::new("thm7", 1.0, conditions))
}

struct OuterSpec {
    label: &'static str,
    expression: &'static str,
    target: &'static [&'static str],
    given: &'static [&'static str],
    a: &'static [&'static str],
    b: &'static [&'static str],
    cond: &'static [&'static str],
    auxiliary: bool,
}

const DESTINATION_CUT: [OuterSpec; 3] = [
    OuterSpec {
        label: "thm2.dst.S1",
        expression: "H(S1|S2,W) <= k I(X1,X3;Y|X2)",
        target: &[S1],
        given: &[S2, W],
        a: &[X1, X3],
        b: &[Y],
        cond: &[X2],
        auxiliary: false,
    },
    OuterSpec {
        label: "thm2.dst.S2",
        expression: "H(S2|S1,W) <= k I(X2,X3;Y|X1)",
        target: &[S2],
        given: &[S1, W],
        a: &[X2, X3],
        b: &[Y],
        cond: &[X1],
        auxiliary: false,
    },
    OuterSpec {
        label: "thm2.dst.S1S2",
        expression: "H(S1,S2|W) <= k I(X1,X2,X3;Y)",
        target: &[S1, S2],
        given: &[W],
        a: &[X1, X2, X3],
        b: &[Y],
        cond: &[],
        auxiliary: false,
    },
];

const BROADCAST_CUT: [OuterSpec; 3] = [
    OuterSpec {
        label: "thm2.aux.S1",
        expression: "H(S1|S2,W,W3) <= k I(X1;Y,Y3|X2,V)",
        target: &[S1],
        given: &[S2, W, W3],
        a: &[X1],
        b: &[Y, Y3],
        cond: &[X2, V],
        auxiliary: true,
    },
    OuterSpec {
        label: "thm2.aux.S2",
        expression: "H(S2|S1,W,W3) <= k I(X2;Y,Y3|X1,V)",
        target: &[S2],
        given: &[S1, W, W3],
        a: &[X2],
        b: &[Y, Y3],
        cond: &[X1, V],
        auxiliary: true,
    },
    OuterSpec {
        label: "thm2.aux.S1S2",
        expression: "H(S1,S2|W,W3) <= k I(X1,X2;Y,Y3|V)",
        target: &[S1, S2],
        given: &[W, W3],
        a: &[X1, X2],
        b: &[Y, Y3],
        cond: &[V],
        auxiliary: true,
    },
];

const RELAY_CUT: [OuterSpec; 3] = [
    OuterSpec {
        label: "thm3.rly.S1",
        expression: "H(S1|S2,W3) <= k I(X1;Y3|X2,X3)",
        target: &[S1],
        given: &[S2, W3],
        a: &[X1],
        b: &[Y3],
        cond: &[X2, X3],
        auxiliary: false,
    },
    OuterSpec {
        label: "thm3.rly.S2",
        expression: "H(S2|S1,W3) <= k I(X2;Y3|X1,X3)",
        target: &[S2],
        given: &[S1, W3],
        a: &[X2],
        b: &[Y3],
        cond: &[X1, X3],
        auxiliary: false,
    },
    OuterSpec {
        label: "thm3.rly.S1S2",
        expression: "H(S1,S2|W3) <= k I(X1,X2;Y3|X3)",
        target: &[S1, S2],
        given: &[W3],
        a: &[X1, X2],
        b: &[Y3],
        cond: &[X3],
        auxiliary: false,
    },
];

fn searched_bounds(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    kappa: f64,
    cfg: &SearchConfig,
    specs: &[&OuterSpec],
) -> Result<Vec<Condition>> {
    specs
        .iter()
        .map(|s| {
            let family = if s.auxiliary {
                InputFamily::Auxiliary {
                    v_size: cfg.aux_cardinality,
                }
            } else if cfg.product_inputs {
                InputFamily::Product
            } else {
                InputFamily::Joint
            };
            let problem = MiProblem::new(s.label, Objective::mi(s.a, s.b, s.cond));
            let best = maximize_mi(ch, &problem, family, cfg)?;
            Ok(Condition::new(
                s.label,
                s.expression,
                ConditionKind::Converse,
                model.h(s.target, s.given),
                kappa * best.best_value_bits,
            )
            .with_witness(best.best_distribution))
        })
        .collect()
}

/// Necessary conditions from the destination cut (maximized over
/// `p(x1,x2,x3)`, or over product inputs when `cfg.product_inputs` is set)
/// and from the broadcast cut with an auxiliary `V`.
///
/// The maxima are found by heuristic search, so a `Violated` verdict relies
/// on the search having found the true maximum within the slack.
pub fn check_outer_thm2(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    kappa: f64,
    cfg: &SearchConfig,
) -> Result<ConditionReport> {
    check_kappa(kappa)?;
    let specs: Vec<&OuterSpec> = DESTINATION_CUT.iter().chain(BROADCAST_CUT.iter()).collect();
    Ok(ConditionReport::new(
        "thm2",
        kappa,
        searched_bounds(model, ch, kappa, cfg, &specs)?,
    ))
}

/// Necessary conditions for the broadcast variant: the destination cut
/// together with the three relay constraints.
pub fn check_outer_thm3_relay(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    kappa: f64,
    cfg: &SearchConfig,
) -> Result<ConditionReport> {
    check_kappa(kappa)?;
    let specs: Vec<&OuterSpec> = DESTINATION_CUT.iter().chain(RELAY_CUT.iter()).collect();
    Ok(ConditionReport::new(
        "thm3",
        kappa,
        searched_bounds(model, ch, kappa, cfg, &specs)?,
    ))
}

/// The destination-cut conditions evaluated at one fixed input distribution
/// `p(x1, x2, x3)`, without any search.
pub fn evaluate_outer_thm2_at(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    kappa: f64,
    p_x: &JointPmf,
) -> Result<ConditionReport> {
    check_kappa(kappa)?;
    let dest = p_x.reorder(&[X1, X2, X3])?.compose(ch.to_destination())?;
    let conditions = DESTINATION_CUT
        .iter()
        .map(|s| {
            Ok(Condition::new(
                s.label,
                s.expression,
                ConditionKind::Converse,
                model.h(s.target, s.given),
                kappa * mi(&dest, s.a, s.b, s.cond)?,
            )
            .with_witness(p_x.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionReport::new("thm2", kappa, conditions))
}
