//! Heuristic maximization of information expressions over channel input
//! distributions.
//!
//! The search space is a product of probability simplices determined by an
//! [`InputFamily`]. Three stages feed one another: a uniform grid over the
//! simplices, Dirichlet(1) random restarts, and coordinate ascent that moves
//! one simplex at a time along vertex directions with a golden-section line
//! search. The result is the best value seen, so it is a lower bound on the
//! true maximum.

use std::collections::BTreeSet;

use marc_core::{mutual_information, JointPmf, Variable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{RateError, Result};
use crate::model::{DmChannel, V, X1, X2, X3, Y, Y3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub grid_points_per_simplex_dim: usize,
    pub random_restarts: usize,
    pub aux_cardinality: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// The grid is coarsened until it has at most this many points.
    pub max_grid_points: usize,
    /// Restrict the destination-cut outer-bound search to independent inputs.
    pub product_inputs: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_points_per_simplex_dim: 11,
            random_restarts: 8,
            aux_cardinality: 4,
            seed: 0,
            max_iterations: 200,
            max_grid_points: 4096,
            product_inputs: false,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_points_per_simplex_dim < 2
            || self.aux_cardinality == 0
            || self.max_iterations == 0
        {
            return Err(RateError::InvalidInput(
                "search config needs grid points >= 2, aux cardinality >= 1 and iterations >= 1"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Family of input distributions searched over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InputFamily {
    /// `p(x1) p(x2) p(x3)`.
    Product,
    /// Arbitrary `p(x1, x2, x3)`.
    Joint,
    /// `p(v) p(x1, x2 | v) p(x3 | v)` with `|V| = v_size`.
    Auxiliary { v_size: usize },
}

/// An information expression built from conditional mutual informations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Mi {
        a: Vec<String>,
        b: Vec<String>,
        given: Vec<String>,
    },
    Sum(Vec<Objective>),
    Min(Vec<Objective>),
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl Objective {
    pub fn mi(a: &[&str], b: &[&str], given: &[&str]) -> Self {
        Objective::Mi {
            a: strings(a),
            b: strings(b),
            given: strings(given),
        }
    }

    pub fn eval(&self, joint: &JointPmf) -> Result<f64> {
        Ok(match self {
            Objective::Mi { a, b, given } => mutual_information(joint, a, b, given)?,
            Objective::Sum(v) => v.iter().map(|o| o.eval(joint)).sum::<Result<f64>>()?,
            Objective::Min(v) => v
                .iter()
                .map(|o| o.eval(joint))
                .try_fold(f64::INFINITY, |m, x| x.map(|x| m.min(x)))?,
        })
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Objective::Mi { a, b, given } => out.extend(a.iter().chain(b).chain(given).cloned()),
            Objective::Sum(v) | Objective::Min(v) => v.iter().for_each(|o| o.collect_vars(out)),
        }
    }
}

/// A variable computed by table lookup from other variables, used to split
/// a composite output into its components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedVar {
    pub name: String,
    pub size: usize,
    pub inputs: Vec<String>,
    /// Row-major over `inputs`.
    pub table: Vec<usize>,
}

/// What to maximize: an objective over the channel variables (and `V` for
/// the auxiliary family), plus optional derived variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiProblem {
    pub label: String,
    pub objective: Objective,
    #[serde(default)]
    pub derived: Vec<DerivedVar>,
}

impl MiProblem {
    pub fn new(label: &str, objective: Objective) -> Self {
        MiProblem {
            label: label.to_string(),
            objective,
            derived: Vec::new(),
        }
    }

    fn referenced(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.objective.collect_vars(&mut s);
        for d in &self.derived {
            s.extend(d.inputs.iter().cloned());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub label: String,
    pub best_value_bits: f64,
    pub family: InputFamily,
    /// Over `X1, X2, X3`, preceded by `V` for the auxiliary family.
    pub best_distribution: JointPmf,
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
enum Outputs {
    None,
    Destination,
    Relay,
    Both,
}

/// Evaluates a problem on input distributions of one family.
struct Evaluator<'a> {
    ch: &'a DmChannel,
    problem: &'a MiProblem,
    family: InputFamily,
    sizes: [usize; 3],
    outputs: Outputs,
}

impl<'a> Evaluator<'a> {
    fn new(ch: &'a DmChannel, problem: &'a MiProblem, family: InputFamily) -> Result<Self> {
        let refs = problem.referenced();
        let derived: BTreeSet<&str> = problem.derived.iter().map(|d| d.name.as_str()).collect();
        for r in &refs {
            let known = [X1, X2, X3, Y, Y3].contains(&r.as_str())
                || derived.contains(r.as_str())
                || (r == V && matches!(family, InputFamily::Auxiliary { .. }));
            if !known {
                return Err(RateError::InvalidInput(format!(
                    "objective references `{r}`, which is not a channel variable"
                )));
            }
        }
        let (y, y3) = (refs.contains(Y), refs.contains(Y3));
        let outputs = match (y, y3) {
            (false, false) => Outputs::None,
            (true, false) => Outputs::Destination,
            (false, true) => Outputs::Relay,
            (true, true) => Outputs::Both,
        };
        if let InputFamily::Auxiliary { v_size: 0 } = family {
            return Err(RateError::InvalidInput(
                "auxiliary cardinality must be positive".into(),
            ));
        }
        Ok(Evaluator {
            ch,
            problem,
            family,
            sizes: ch.input_sizes(),
            outputs,
        })
    }

    fn simplex_sizes(&self) -> Vec<usize> {
        let [n1, n2, n3] = self.sizes;
        match self.family {
            InputFamily::Product => vec![n1, n2, n3],
            InputFamily::Joint => vec![n1 * n2 * n3],
            InputFamily::Auxiliary { v_size } => {
                let mut v = vec![v_size];
                v.extend(std::iter::repeat_n(n1 * n2, v_size));
                v.extend(std::iter::repeat_n(n3, v_size));
                v
            }
        }
    }

    fn input_joint(&self, params: &[Vec<f64>]) -> Result<JointPmf> {
        let [n1, n2, n3] = self.sizes;
        let xs = vec![
            Variable::new(X1, n1),
            Variable::new(X2, n2),
            Variable::new(X3, n3),
        ];
        Ok(match self.family {
            InputFamily::Product => {
                let mut w = Vec::with_capacity(n1 * n2 * n3);
                for a in &params[0] {
                    for b in &params[1] {
                        for c in &params[2] {
                            w.push(a * b * c);
                        }
                    }
                }
                JointPmf::normalized(xs, w)?
            }
            InputFamily::Joint => JointPmf::normalized(xs, params[0].clone())?,
            InputFamily::Auxiliary { v_size } => {
                let mut vars = vec![Variable::new(V, v_size)];
                vars.extend(xs);
                let mut w = Vec::with_capacity(v_size * n1 * n2 * n3);
                for v in 0..v_size {
                    let pv = params[0][v];
                    for x12 in &params[1 + v] {
                        for x3 in &params[1 + v_size + v] {
                            w.push(pv * x12 * x3);
                        }
                    }
                }
                JointPmf::normalized(vars, w)?
            }
        })
    }

    fn eval(&self, params: &[Vec<f64>]) -> Result<f64> {
        let input = self.input_joint(params)?;
        let mut joint = match self.outputs {
            Outputs::None => input,
            Outputs::Destination => input.compose(self.ch.to_destination())?,
            Outputs::Relay => input.compose(self.ch.to_relay())?,
            Outputs::Both => input.compose(self.ch.law())?,
        };
        for d in &self.problem.derived {
            let axes = joint.axes(&d.inputs)?;
            let sizes: Vec<usize> = axes.iter().map(|&a| joint.variables()[a].size).collect();
            if d.table.len() != sizes.iter().product::<usize>() {
                return Err(RateError::InvalidInput(format!(
                    "derived variable `{}` has a table of the wrong length",
                    d.name
                )));
            }
            let table = &d.table;
            joint = joint.with_function(&d.name, d.size, &d.inputs, |idx| {
                let mut cell = 0;
                for (i, s) in idx.iter().zip(&sizes) {
                    cell = cell * s + i;
                }
                table[cell]
            })?;
        }
        self.problem.objective.eval(&joint)
    }
}

/// All points of the simplex of dimension `k - 1` whose coordinates are
/// multiples of `1 / (g - 1)`.
fn simplex_grid(k: usize, g: usize) -> Vec<Vec<f64>> {
    let m = g - 1;
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<f64>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.iter().map(|&c| c as f64 / m as f64).collect());
            return;
        }
        for c in 0..=left {
            cur[pos] = c;
            rec(pos + 1, left - c, cur, m, out);
        }
    }
    rec(0, m, &mut cur, m, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn grid_size(simplices: &[usize], g: usize) -> f64 {
    simplices
        .iter()
        .map(|&k| binomial(g - 1 + k - 1, k - 1))
        .product()
}

fn dirichlet_point(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

const INVPHI: f64 = 0.618_033_988_749_894_8;
const LINE_SEARCH_STEPS: usize = 30;
const IMPROVEMENT: f64 = 1e-12;

/// Maximizes `f` over `t` in `[0, 1]` by golden-section search, also trying
/// both endpoints.
fn golden_section(f: &mut impl FnMut(f64) -> f64) -> (f64, f64) {
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..LINE_SEARCH_STEPS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let mid = if fc >= fd { (c, fc) } else { (d, fd) };
    let end = f(1.0);
    if end > mid.1 {
        (1.0, end)
    } else {
        mid
    }
}

fn toward_vertex(p: &[f64], j: usize, t: f64) -> Vec<f64> {
    p.iter()
        .enumerate()
        .map(|(i, &x)| (1.0 - t) * x + if i == j { t } else { 0.0 })
        .collect()
}

fn away_from_vertex(p: &[f64], j: usize, t: f64) -> Option<Vec<f64>> {
    let mut out: Vec<f64> = p.to_vec();
    out[j] *= 1.0 - t;
    // Renormalize by the actual mass so rounding drift cannot accumulate.
    let rest: f64 = out.iter().sum();
    if rest <= 1e-15 {
        return None;
    }
    out.iter_mut().for_each(|x| *x /= rest);
    Some(out)
}

/// Coordinate ascent over simplices; returns the final point, its value and
/// the number of evaluations.
fn ascend(
    ev: &Evaluator,
    mut params: Vec<Vec<f64>>,
    max_iterations: usize,
) -> Result<(Vec<Vec<f64>>, f64, usize)> {
    let mut best = ev.eval(&params)?;
    let mut evals = 1;
    let mut failure = None;
    for _ in 0..max_iterations {
        let start = best;
        for s in 0..params.len() {
            let k = params[s].len();
            if k < 2 {
                continue;
            }
            for j in 0..k {
                for away in [false, true] {
                    let base = params[s].clone();
                    let mut line = |t: f64| -> f64 {
                        let cand = if away {
                            match away_from_vertex(&base, j, t) {
                                Some(c) => c,
                                None => return f64::NEG_INFINITY,
                            }
                        } else {
                            toward_vertex(&base, j, t)
                        };
                        let mut trial = params.clone();
                        trial[s] = cand;
                        evals += 1;
                        match ev.eval(&trial) {
                            Ok(v) => v,
                            Err(e) => {
                                failure.get_or_insert(e);
                                f64::NEG_INFINITY
                            }
                        }
                    };
                    let (t, v) = golden_section(&mut line);
                    if v > best + IMPROVEMENT {
                        best = v;
                        params[s] = if away {
                            away_from_vertex(&base, j, t).expect("evaluated point exists")
                        } else {
                            toward_vertex(&base, j, t)
                        };
                    }
                }
            }
        }
        if let Some(e) = failure {
            return Err(e);
        }
        if best - start <= 1e-10 {
            break;
        }
    }
    Ok((params, best, evals))
}

/// Maximizes `problem` over input distributions from `family`.
///
/// The result is deterministic for a given configuration: restarts use seeds
/// `cfg.seed + index` and ties are broken by stage order.
pub fn maximize_mi(
    ch: &DmChannel,
    problem: &MiProblem,
    family: InputFamily,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    cfg.validate()?;
    let ev = Evaluator::new(ch, problem, family)?;
    let simplices = ev.simplex_sizes();

    // Grid stage, coarsened to respect the point budget.
    let mut g = cfg.grid_points_per_simplex_dim;
    while g > 2 && grid_size(&simplices, g) > cfg.max_grid_points as f64 {
        g -= 1;
    }
    let mut starts: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut evaluations = 0;
    if grid_size(&simplices, g) <= cfg.max_grid_points as f64 {
        let per: Vec<Vec<Vec<f64>>> = simplices.iter().map(|&k| simplex_grid(k, g)).collect();
        let mut combos = vec![Vec::new()];
        for pts in &per {
            combos = combos
                .into_iter()
                .flat_map(|c: Vec<Vec<f64>>| {
                    pts.iter().map(move |p| {
                        let mut c = c.clone();
                        c.push(p.clone());
                        c
                    })
                })
                .collect();
        }
        let values: Vec<f64> = combos
            .par_iter()
            .map(|c| ev.eval(c))
            .collect::<Result<Vec<_>>>()?;
        evaluations += values.len();
        let best = values
            .iter()
            .enumerate()
            .fold(0, |b, (i, v)| if *v > values[b] { i } else { b });
        starts.push(combos[best].clone());
    }
    for r in 0..cfg.random_restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
        starts.push(
            simplices
                .iter()
                .map(|&k| dirichlet_point(k, &mut rng))
                .collect(),
        );
    }
    if starts.is_empty() {
        starts.push(simplices.iter().map(|&k| vec![1.0 / k as f64; k]).collect());
    }

    let runs: Vec<(Vec<Vec<f64>>, f64, usize)> = starts
        .into_par_iter()
        .map(|s| ascend(&ev, s, cfg.max_iterations))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        evaluations += r.2;
        if r.1 > runs[best].1 {
            best = i;
        }
    }
    Ok(SearchResult {
        label: problem.label.clone(),
        best_value_bits: runs[best].1,
        family,
        best_distribution: ev.input_joint(&runs[best].0)?,
        evaluations,
    })
}
