#![allow(dead_code)]

use marc_core::{ConditionalPmf, JointPmf, Variable};
use marc_rates::model::{S1, S2, W, W3};
use marc_rates::{DmChannel, SourceSideInfoModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive random weights with occasional exact zeros; never all zero.
pub fn weights(rng: &mut ChaCha8Rng, n: usize, zero_prob: f64) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random::<f64>() < zero_prob {
                0.0
            } else {
                -rng.random::<f64>().max(1e-300).ln()
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[rng.random_range(0..n)] = 1.0;
    }
    w
}

pub fn vars(spec: &[(&str, usize)]) -> Vec<Variable> {
    spec.iter().map(|(n, s)| Variable::new(*n, *s)).collect()
}

pub fn pmf(rng: &mut ChaCha8Rng, spec: &[(&str, usize)], zero_prob: f64) -> JointPmf {
    let v = vars(spec);
    let n = v.iter().map(|x| x.size).product();
    JointPmf::normalized(v, weights(rng, n, zero_prob)).unwrap()
}

pub fn kernel(
    rng: &mut ChaCha8Rng,
    given: &[(&str, usize)],
    outputs: &[(&str, usize)],
    zero_prob: f64,
) -> ConditionalPmf {
    let rows: usize = given.iter().map(|g| g.1).product();
    let cells: usize = outputs.iter().map(|o| o.1).product();
    let k: Vec<f64> = (0..rows)
        .flat_map(|_| weights(rng, cells, zero_prob))
        .collect();
    ConditionalPmf::normalized(vars(given), vars(outputs), k).unwrap()
}

pub fn channel(rng: &mut ChaCha8Rng, x: [usize; 3], y: usize, y3: usize) -> DmChannel {
    let rows = x[0] * x[1] * x[2];
    let table: Vec<f64> = (0..rows).flat_map(|_| weights(rng, y * y3, 0.3)).collect();
    DmChannel::from_fn(x, y, y3, |xs, a, b| {
        table[((xs[0] * x[1] + xs[1]) * x[2] + xs[2]) * y * y3 + a * y3 + b]
    })
    .unwrap()
}

pub fn model(rng: &mut ChaCha8Rng, sizes: [usize; 4]) -> SourceSideInfoModel {
    SourceSideInfoModel::new(pmf(
        rng,
        &[
            (S1, sizes[0]),
            (S2, sizes[1]),
            (W, sizes[2]),
            (W3, sizes[3]),
        ],
        0.2,
    ))
    .unwrap()
}

pub fn model_from(sizes: [usize; 4], f: impl Fn(&[usize]) -> f64) -> SourceSideInfoModel {
    let v = vars(&[
        (S1, sizes[0]),
        (S2, sizes[1]),
        (W, sizes[2]),
        (W3, sizes[3]),
    ]);
    SourceSideInfoModel::new(JointPmf::from_fn(v, f).unwrap()).unwrap()
}

/// Independent uniform bits with no side information.
pub fn independent_bits() -> SourceSideInfoModel {
    model_from([2, 2, 1, 1], |_| 0.25)
}

pub fn constant_sources() -> SourceSideInfoModel {
    model_from(
        [2, 2, 1, 1],
        |c| if c[0] == 0 && c[1] == 0 { 1.0 } else { 0.0 },
    )
}
