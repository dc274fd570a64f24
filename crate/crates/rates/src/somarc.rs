//! The semi-orthogonal MARC example: binary inputs, an orthogonal
//! relay-to-destination bit pipe, and a binary adder from the sources.

use marc_core::{JointPmf, Variable};

use crate::error::Result;
use crate::model::{DmChannel, SourceSideInfoModel, S1, S2, X1, X2, X3, Y3};
use crate::search::{
    maximize_mi, DerivedVar, InputFamily, MiProblem, Objective, SearchConfig, SearchResult,
};

/// Sources uniform on `{(0,0), (0,1), (1,1)}` with no side information.
pub fn somarc_sources() -> SourceSideInfoModel {
    let t = 1.0 / 3.0;
    let pair = JointPmf::normalized(
        vec![Variable::new(S1, 2), Variable::new(S2, 2)],
        vec![t, t, 0.0, t],
    )
    .expect("fixed table");
    SourceSideInfoModel::without_side_info(&pair).expect("fixed table")
}

/// Full channel: the destination observes `Y = (Y_R, Y_S)` packed as
/// `3 * Y_R + Y_S` with `Y_R = X3` and `Y_S = X1 + X2`; the relay observes
/// `Y3 = X1 xor X2`.
pub fn somarc_channel() -> DmChannel {
    DmChannel::deterministic([2, 2, 2], 6, 2, |[x1, x2, x3]| (3 * x3 + x1 + x2, x1 ^ x2))
        .expect("fixed channel")
}

/// The multiple-access part alone: `X3` is inert and both receivers see
/// `X1 + X2`.
pub fn somarc_mac_channel() -> DmChannel {
    DmChannel::deterministic([2, 2, 1], 3, 3, |[x1, x2, _]| (x1 + x2, x1 + x2))
        .expect("fixed channel")
}

/// `min{ I(X1,X2; Y3,Y_S), I(X3; Y_R) + I(X1,X2; Y_S) }` on the full channel.
pub fn sum_rate_problem() -> MiProblem {
    let mut p = MiProblem::new(
        "somarc.sum_rate",
        Objective::Min(vec![
            Objective::mi(&[X1, X2], &[Y3, "YS"], &[]),
            Objective::Sum(vec![
                Objective::mi(&[X3], &["YR"], &[]),
                Objective::mi(&[X1, X2], &["YS"], &[]),
            ]),
        ]),
    );
    p.derived = vec![
        DerivedVar {
            name: "YR".into(),
            size: 2,
            inputs: vec!["Y".into()],
            table: (0..6).map(|y| y / 3).collect(),
        },
        DerivedVar {
            name: "YS".into(),
            size: 3,
            inputs: vec!["Y".into()],
            table: (0..6).map(|y| y % 3).collect(),
        },
    ];
    p
}

/// Upper bound on the sum capacity, maximized over independent inputs.
pub fn sum_rate_bound(cfg: &SearchConfig) -> Result<SearchResult> {
    maximize_mi(
        &somarc_channel(),
        &sum_rate_problem(),
        InputFamily::Product,
        cfg,
    )
}
