//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::time::Instant;

use marc_core::{
    derive_seed, entropy, gacs_korner_common_part, is_markov_chain, mutual_information, sample,
    strongly_typical, validate_factorization, ConditionalPmf, Factor, JointPmf, TypicalityQuery,
    Variable,
};
use marc_fading::{
    exp_integral_e1, expected_log2_capacity, monte_carlo_log2_capacity, phase_df_conditions,
    phase_region, Attenuations, FadingKind, FadingMarcParams, McConfig, Method,
};
use marc_rates::model::{Q, S1, S2, V1, V2, W, W3, X1, X2, X3, Y};
use marc_rates::somarc::{somarc_mac_channel, somarc_sources};
use marc_rates::{
    check_outer_thm2, check_thm1, check_thm6_cpm, evaluate_outer_thm2_at, maximize_mi, CpmInputA,
    DmChannel, InputFamily, MiProblem, Objective, OuterVerdict, SearchConfig, SeparationInput,
    SourceSideInfoModel,
};
use marc_sim::{
    is_monotone, run_separation_df, run_uncoded_somarc, separation_margin_sweep, BlockMarkovConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1_somarc_sum_capacity() -> Check {
    let start = Instant::now();
    let p = MiProblem::new("adder", Objective::mi(&[X1, X2], &[Y], &[]));
    let r = maximize_mi(
        &somarc_mac_channel(),
        &p,
        InputFamily::Product,
        &SearchConfig::default(),
    )
    .map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    ensure(
        (r.best_value_bits - 1.5).abs() <= 1e-3,
        format!("max I(X1,X2;YS) = {}", r.best_value_bits),
    )?;
    ensure(secs < 5.0, format!("took {secs:.2} s"))?;
    Ok(format!(
        "max I(X1,X2;YS) = {:.6} bits in {secs:.2} s",
        r.best_value_bits
    ))
}

fn c2_somarc_entropy() -> Check {
    let h = somarc_sources().h(&[S1, S2], &[]);
    ensure((h - 3f64.log2()).abs() <= 1e-10, format!("H(S1,S2) = {h}"))?;
    Ok(format!("H(S1,S2) = {h:.12} bits"))
}

fn c3_separation_infeasible() -> Check {
    let (model, ch) = (somarc_sources(), somarc_mac_channel());
    let mut best = f64::NEG_INFINITY;
    for i in 0..=20 {
        for j in 0..=20 {
            let (a, b) = (i as f64 / 20.0, j as f64 / 20.0);
            let vars = vec![
                Variable::new(X1, 2),
                Variable::new(X2, 2),
                Variable::new(X3, 1),
            ];
            let px = JointPmf::from_fn(vars, |c| {
                (if c[0] == 1 { a } else { 1.0 - a }) * (if c[1] == 1 { b } else { 1.0 - b })
            })
            .map_err(err)?;
            let r = evaluate_outer_thm2_at(&model, &ch, 1.0, &px).map_err(err)?;
            let c = r.get("thm2.dst.S1S2").ok_or("missing sum condition")?;
            ensure(
                !c.satisfied && r.verdict == Some(OuterVerdict::Violated),
                format!("holds at p = ({a}, {b})"),
            )?;
            best = best.max(c.rhs_bits);
        }
    }
    Ok(format!(
        "violated at all 441 grid points; best I(X1,X2;YS) = {best:.4} < log2 3"
    ))
}

fn c4_uncoded_zero_error() -> Check {
    let mut slowest = 0.0f64;
    for seed in [1, 2, 3, 4, 5] {
        let start = Instant::now();
        let r = run_uncoded_somarc(100_000, seed).map_err(err)?;
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        ensure(r.trials == 100_000, "wrong trial count")?;
        ensure(
            r.dest_trial_errors == 0 && r.dest_block_errors == 0 && r.p_err_estimate == 0.0,
            format!("seed {seed}: {} errors", r.dest_trial_errors),
        )?;
        ensure(secs < 2.0, format!("seed {seed} took {secs:.2} s"))?;
    }
    Ok(format!(
        "0 errors in 5 x 1e5 trials; slowest run {slowest:.3} s"
    ))
}

fn c5_e1_accuracy() -> Check {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../fading/tests/data/e1_reference.txt"
    );
    let text = std::fs::read_to_string(path).map_err(err)?;
    let mut worst = 0.0f64;
    let mut n = 0;
    for line in text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let mut it = line.split_whitespace();
        let x: f64 = it.next().ok_or("bad line")?.parse().map_err(err)?;
        let want: f64 = it.next().ok_or("bad line")?.parse().map_err(err)?;
        let got = exp_integral_e1(x).map_err(err)?;
        worst = worst.max(((got - want) / want).abs());
        n += 1;
    }
    ensure(n == 1000, format!("{n} reference points"))?;
    ensure(worst <= 1e-10, format!("worst relative error {worst:e}"))?;
    Ok(format!(
        "worst relative error {worst:.2e} over {n} points in [1e-6, 700]"
    ))
}

fn c6_rayleigh_closed_forms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for set in 0..50u64 {
        let one = [10f64.powf(rng.random_range(-2.0..2.0))];
        let two = [
            10f64.powf(rng.random_range(-2.0..2.0)),
            10f64.powf(rng.random_range(-2.0..2.0)),
        ];
        for (k, scales) in [&one[..], &two[..]].into_iter().enumerate() {
            let exact = expected_log2_capacity(scales, &McConfig::default()).map_err(err)?;
            ensure(
                exact.method == Method::Exact,
                format!("{scales:?} not in closed form"),
            )?;
            let mc = McConfig {
                samples: 10_000_000,
                seed: derive_seed(6, set, k as u64),
            };
            let m = monte_carlo_log2_capacity(scales, &mc).map_err(err)?;
            let z = (m.bits - exact.bits).abs() / m.std_error;
            ensure(
                z <= 3.0,
                format!("set {set}, scales {scales:?}: {z:.2} standard errors"),
            )?;
            worst = worst.max(z);
        }
    }
    Ok(format!(
        "50 one-scale and 50 two-scale sets within {worst:.2} standard errors"
    ))
}

fn c7_phase_region() -> Check {
    let a = Attenuations {
        a11: 1.0,
        a21: 1.0,
        a31: 1.0,
        a13: 2.0,
        a23: 2.0,
    };
    let p = FadingMarcParams::new(FadingKind::Phase, a, [1.0; 3]).map_err(err)?;
    let df = phase_df_conditions(&p).map_err(err)?;
    let th = phase_region(&p, 1.0).map_err(err)?;
    ensure(df == [true; 3], format!("relay conditions {df:?}"))?;
    ensure(
        th == [3f64.log2(), 3f64.log2(), 2.0],
        format!("thresholds {th:?}"),
    )?;
    Ok(format!("conditions {df:?}, thresholds {th:?}"))
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    sparse_weights(rng, n, 0.0)
}

/// Normalized exponential weights, each zeroed with probability `zero`;
/// never all zero.
fn sparse_weights(rng: &mut ChaCha8Rng, n: usize, zero: f64) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random::<f64>() < zero {
                0.0
            } else {
                -rng.random::<f64>().max(1e-300).ln()
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[rng.random_range(0..n)] = 1.0;
    }
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn unit(name: &str) -> JointPmf {
    JointPmf::point(vec![Variable::new(name, 1)], &[0]).expect("unit variable")
}

fn c8_theorem_cross_consistency() -> Check {
    const PAIRS: [(&str, &str); 6] = [
        ("thm1.rly.S1", "thm6.rly.S1"),
        ("thm1.rly.S2", "thm6.rly.S2"),
        ("thm1.rly.S1S2", "thm6.rly.S1S2"),
        ("thm1.dst.S1", "thm6.dst.S1"),
        ("thm1.dst.S2", "thm6.dst.S2"),
        ("thm1.dst.S1S2", "thm6.dst.S1S2"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut satisfied = 0;
    for inst in 0..100 {
        let s = [2, 2, 2, 2];
        let joint = JointPmf::new(
            vec![
                Variable::new(S1, s[0]),
                Variable::new(S2, s[1]),
                Variable::new(W, s[2]),
                Variable::new(W3, s[3]),
            ],
            sparse_weights(&mut rng, 16, 0.6),
        )
        .map_err(err)?;
        let model = SourceSideInfoModel::new(joint).map_err(err)?;
        // Mostly sparse rows, so that some instances have capacity to spare.
        let (ny, ny3) = (rng.random_range(2..5), rng.random_range(2..5));
        let table: Vec<f64> = (0..8)
            .flat_map(|_| sparse_weights(&mut rng, ny * ny3, 0.85))
            .collect();
        let ch = DmChannel::from_fn([2, 2, 2], ny, ny3, |x, a, b| {
            table[((x[0] * 2 + x[1]) * 2 + x[2]) * ny * ny3 + a * ny3 + b]
        })
        .map_err(err)?;
        let (p1, p2, p3) = (
            random_weights(&mut rng, 2),
            random_weights(&mut rng, 2),
            random_weights(&mut rng, 2),
        );
        let kernel = |given: &[(&str, usize)], out: &str, p: &[f64]| {
            ConditionalPmf::constant(
                given.iter().map(|(n, k)| Variable::new(*n, *k)).collect(),
                vec![Variable::new(out, p.len())],
                p,
            )
        };
        let cpm = CpmInputA::new(
            unit(Q),
            unit(V1),
            unit(V2),
            kernel(&[(S1, 2), (V1, 1), (Q, 1)], X1, &p1).map_err(err)?,
            kernel(&[(S2, 2), (V2, 1), (Q, 1)], X2, &p2).map_err(err)?,
            kernel(&[(V1, 1), (V2, 1)], X3, &p3).map_err(err)?,
        )
        .map_err(err)?;
        let t1 = check_thm1(
            &model,
            &ch,
            &SeparationInput::independent(&p1, &p2, &p3).map_err(err)?,
            1.0,
        )
        .map_err(err)?;
        let t6 = check_thm6_cpm(&model, &ch, &cpm).map_err(err)?;
        for (a, b) in PAIRS {
            let (a, b) = (t1.get(a).ok_or(a)?, t6.get(b).ok_or(b)?);
            ensure(
                a.satisfied == b.satisfied
                    && (a.lhs_bits - b.lhs_bits).abs() <= 1e-9
                    && (a.rhs_bits - b.rhs_bits).abs() <= 1e-9,
                format!("instance {inst}: {} disagrees", a.label),
            )?;
            satisfied += a.satisfied as usize;
        }
    }
    Ok(format!(
        "100 instances, 600 conditions agree ({satisfied} satisfied)"
    ))
}

fn identical_bits() -> std::result::Result<SourceSideInfoModel, String> {
    let pair = JointPmf::new(
        vec![Variable::new(S1, 2), Variable::new(S2, 2)],
        vec![0.5, 0.0, 0.0, 0.5],
    )
    .map_err(err)?;
    SourceSideInfoModel::without_side_info(&pair).map_err(err)
}

fn independent_bits() -> std::result::Result<SourceSideInfoModel, String> {
    let pair = JointPmf::uniform(vec![Variable::new(S1, 2), Variable::new(S2, 2)]).map_err(err)?;
    SourceSideInfoModel::without_side_info(&pair).map_err(err)
}

fn uniform_inputs(x: [usize; 3]) -> std::result::Result<SeparationInput, String> {
    let u = |n: usize| vec![1.0 / n as f64; n];
    SeparationInput::independent(&u(x[0]), &u(x[1]), &u(x[2])).map_err(err)
}

fn c9_scheme_properties() -> Check {
    let start = Instant::now();
    // Noiseless pipes: the relay sees (x1, x2), the destination (x1, x2, x3).
    let good_ch = DmChannel::deterministic([8, 8, 4], 256, 64, |[a, b, c]| {
        ((a * 8 + b) * 4 + c, a * 8 + b)
    })
    .map_err(err)?;
    let (good_model, good_input) = (identical_bits()?, uniform_inputs([8, 8, 4])?);
    let bits = |k: u32| [k as f64 / 8.0; 4];

    let thm1 = check_thm1(&good_model, &good_ch, &good_input, 1.0).map_err(err)?;
    let min_margin = thm1.min_margin();
    ensure(
        thm1.all_satisfied && min_margin >= 0.3,
        format!("in-region margins {min_margin}"),
    )?;
    let cfg = BlockMarkovConfig::separation(8, 8, 3, bits(9)).with_seed(1);
    let good = run_separation_df(&good_model, &good_ch, &good_input, &cfg, 500).map_err(err)?;
    ensure(
        good.p_err_estimate <= 0.05,
        format!("in-region p_err = {}", good.p_err_estimate),
    )?;

    // Independent bits over a modulo-2 adder: H(S1,S2) = 2 bits, one bit per use.
    let xor_ch =
        DmChannel::deterministic([2, 2, 1], 2, 4, |[a, b, _]| (a ^ b, a * 2 + b)).map_err(err)?;
    let (bad_model, bad_input) = (independent_bits()?, uniform_inputs([2, 2, 1])?);
    let search = SearchConfig {
        aux_cardinality: 2,
        ..SearchConfig::default()
    };
    let outer = check_outer_thm2(&bad_model, &xor_ch, 1.0, &search).map_err(err)?;
    let excess = -outer
        .get("thm2.dst.S1S2")
        .ok_or("missing sum bound")?
        .margin_bits;
    ensure(
        excess >= 0.5,
        format!("sum rate exceeds the bound by only {excess}"),
    )?;
    let cfg = BlockMarkovConfig::separation(8, 8, 3, bits(8)).with_seed(2);
    let bad = run_separation_df(&bad_model, &xor_ch, &bad_input, &cfg, 500).map_err(err)?;
    ensure(
        bad.p_err_estimate >= 0.5,
        format!("outside-region p_err = {}", bad.p_err_estimate),
    )?;

    let configs: Vec<_> = [5, 6, 7]
        .iter()
        .map(|&k| BlockMarkovConfig::separation(8, 8, 3, bits(k)).with_seed(9))
        .collect();
    let (points, _) =
        separation_margin_sweep(&good_model, &good_ch, &good_input, &configs, 500).map_err(err)?;
    ensure(
        is_monotone(&points),
        format!("sweep not monotone: {points:?}"),
    )?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("took {secs:.1} s"))?;
    let sweep: Vec<String> = points
        .iter()
        .map(|p| format!("{:+.3}:{:.3}", p.margin_bits, p.p_err))
        .collect();
    Ok(format!(
        "in-region p_err {:.3}, excess {excess:.2} bits gives p_err {:.3}, sweep [{}], {secs:.1} s",
        good.p_err_estimate,
        bad.p_err_estimate,
        sweep.join(", ")
    ))
}

fn random_pmf(
    rng: &mut ChaCha8Rng,
    spec: &[(&str, usize)],
) -> std::result::Result<JointPmf, String> {
    let vars: Vec<Variable> = spec.iter().map(|(n, k)| Variable::new(*n, *k)).collect();
    let n = spec.iter().map(|s| s.1).product();
    JointPmf::new(vars, random_weights(rng, n)).map_err(err)
}

fn random_kernel(
    rng: &mut ChaCha8Rng,
    given: (&str, usize),
    out: (&str, usize),
) -> std::result::Result<ConditionalPmf, String> {
    let k: Vec<f64> = (0..given.1)
        .flat_map(|_| random_weights(rng, out.1))
        .collect();
    ConditionalPmf::new(
        vec![Variable::new(given.0, given.1)],
        vec![Variable::new(out.0, out.1)],
        k,
    )
    .map_err(err)
}

fn c10_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let tol = 1e-10;
    for i in 0..200 {
        let sz = |rng: &mut ChaCha8Rng| rng.random_range(1..4);
        let (a, b, c) = (sz(&mut rng), sz(&mut rng), sz(&mut rng));
        let p = random_pmf(&mut rng, &[("A", a), ("B", b), ("C", c)])?;
        let h = |t: &[&str], g: &[&str]| entropy(&p, t, g).map_err(err);
        let mi = |x: &[&str], y: &[&str], g: &[&str]| mutual_information(&p, x, y, g).map_err(err);
        ensure(
            (h(&["A", "B"], &["C"])? - h(&["A"], &["C"])? - h(&["B"], &["A", "C"])?).abs() < tol,
            format!("chain rule, instance {i}"),
        )?;
        let (iab, iba) = (mi(&["A"], &["B"], &["C"])?, mi(&["B"], &["A"], &["C"])?);
        ensure(
            iab >= -tol && (iab - iba).abs() < tol,
            format!("mutual information, instance {i}"),
        )?;

        // p(x) p(y|x) p(z|y) is a Markov chain and factorizes as built.
        let chain = random_pmf(&mut rng, &[("X", a)])?
            .compose(&random_kernel(&mut rng, ("X", a), ("Y", b))?)
            .map_err(err)?
            .compose(&random_kernel(&mut rng, ("Y", b), ("Z", c))?)
            .map_err(err)?;
        ensure(
            is_markov_chain(&chain, &["X"], &["Y"], &["Z"], 1e-9).map_err(err)?,
            format!("Markov chain, instance {i}"),
        )?;
        let pattern = [
            Factor::new(&["X"], &[]),
            Factor::new(&["Y"], &["X"]),
            Factor::new(&["Z"], &["Y"]),
        ];
        ensure(
            validate_factorization(&chain, &pattern, 1e-9).map_err(err)?,
            format!("factorization, instance {i}"),
        )?;

        // Common part is invariant under relabelling the second source.
        let mut w: Vec<f64> = random_weights(&mut rng, 9)
            .into_iter()
            .map(|x| if x < 0.05 { 0.0 } else { x })
            .collect();
        if w.iter().all(|&x| x == 0.0) {
            w[0] = 1.0;
        }
        let pair = JointPmf::normalized(
            vec![Variable::new("S1", 3), Variable::new("S2", 3)],
            w.clone(),
        )
        .map_err(err)?;
        let perm = [2usize, 0, 1];
        let mut pw = vec![0.0; 9];
        for s1 in 0..3 {
            for s2 in 0..3 {
                pw[s1 * 3 + perm[s2]] = w[s1 * 3 + s2];
            }
        }
        let permuted =
            JointPmf::normalized(vec![Variable::new("S1", 3), Variable::new("S2", 3)], pw)
                .map_err(err)?;
        let (cp, cq) = (
            gacs_korner_common_part(&pair).map_err(err)?,
            gacs_korner_common_part(&permuted).map_err(err)?,
        );
        ensure(
            cp.t_size == cq.t_size && cp.h1 == cq.h1,
            format!("common part, instance {i}"),
        )?;

        // Seeded sampling is reproducible.
        let seed = rng.random::<u64>();
        ensure(
            sample(&p, 17, seed).map_err(err)? == sample(&p, 17, seed).map_err(err)?,
            "sampling reproducibility",
        )?;
    }

    // Typicality boundary cases: six ones in ten against p(1) = 0.5.
    let bit = JointPmf::uniform(vec![Variable::new("X", 2)]).map_err(err)?;
    let seq = vec![vec![1, 1, 1, 1, 1, 1, 0, 0, 0, 0]];
    let at = |eps: f64| {
        strongly_typical(
            &seq,
            &bit,
            TypicalityQuery {
                epsilon: eps,
                n: 10,
            },
        )
        .map_err(err)
    };
    ensure(
        at(0.2)? && !at(0.19)? && !at(0.0)? && at(f64::INFINITY)?,
        "typicality boundary",
    )?;
    Ok("chain rule, MI symmetry, Markov chains, factorization, common part, typicality, RNG: 200 instances".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("SOMARC sum-capacity bound", c1_somarc_sum_capacity),
        ("SOMARC source entropy", c2_somarc_entropy),
        ("separation infeasible on SOMARC", c3_separation_infeasible),
        ("uncoded zero error", c4_uncoded_zero_error),
        ("E1 accuracy", c5_e1_accuracy),
        (
            "Rayleigh closed forms vs Monte Carlo",
            c6_rayleigh_closed_forms,
        ),
        ("phase-fading region arithmetic", c7_phase_region),
        ("theorem cross-consistency", c8_theorem_cross_consistency),
        ("block-Markov scheme properties", c9_scheme_properties),
        ("invariant suites", c10_invariants),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} [{secs:.1} s]",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
