use anyhow::{bail, Context, Result};
use marc_fading::{
    check_separation_optimal, phase_df_conditions, phase_region, rayleigh_df_bounds,
    rayleigh_df_conditions, rayleigh_region, FadingKind, FadingMarcParams, McConfig,
    SeparationVerdict, SourceEntropies,
};
use marc_rates::somarc::sum_rate_bound;
use marc_rates::{
    check_crbc, check_outer_thm2, check_outer_thm3_relay, check_thm1, check_thm6_cpm,
    check_thm7_cpm, ConditionReport, CpmInputA, CpmInputB, CrbcInput, DmChannel, OuterVerdict,
    SearchConfig, SeparationInput, SourceSideInfoModel,
};
use marc_sim::{
    run_cpm_scheme_a, run_cpm_scheme_b, run_separation_df, run_uncoded_somarc,
    separation_margin_sweep, BlockMarkovConfig, SimReport,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{Common, FadingCheck, OuterTheorem, RegionTheorem, SimScheme};
use crate::io::{envelope, read_json, required, Output};

/// How a command that ran to completion went.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

const DEFAULT_TRIALS: usize = 1000;
const DEMO_TRIALS: usize = 100_000;

fn load_model(c: &Common) -> Result<SourceSideInfoModel> {
    read_json(required(&c.model, "model")?, "model")
}

fn load_channel(c: &Common) -> Result<DmChannel> {
    read_json(required(&c.channel, "channel")?, "channel")
}

fn paths(c: &Common) -> Value {
    json!({
        "model": c.model,
        "channel": c.channel,
        "input": c.input,
        "config": c.config,
        "kappa": c.kappa,
        "epsilon": c.epsilon,
        "trials": c.trials,
        "seed": c.seed,
        "csv": c.csv,
    })
}

fn print_conditions(r: &ConditionReport) {
    for c in &r.conditions {
        println!(
            "  {:<16} {:>9.4} vs {:>9.4}  margin {:>+8.4}  {}",
            c.label,
            c.lhs_bits,
            c.rhs_bits,
            c.margin_bits,
            if c.satisfied { "ok" } else { "FAIL" }
        );
    }
}

pub fn region(theorem: RegionTheorem, c: &Common) -> Result<Outcome> {
    let model = load_model(c)?;
    let ch = load_channel(c)?;
    let input_path = required(&c.input, "input")?;
    let kappa = c.kappa.unwrap_or(1.0);
    let fixed_kappa = || -> Result<()> {
        if kappa != 1.0 {
            bail!("--kappa: the joint source-channel theorems hold at kappa = 1 only, got {kappa}");
        }
        Ok(())
    };
    let (name, input, report) = match theorem {
        RegionTheorem::Separation => {
            let input: SeparationInput = read_json(input_path, "input")?;
            let r = check_thm1(&model, &ch, &input, kappa)?;
            ("thm1", serde_json::to_value(input)?, r)
        }
        RegionTheorem::CpmA => {
            fixed_kappa()?;
            let input: CpmInputA = read_json(input_path, "input")?;
            let r = check_thm6_cpm(&model, &ch, &input)?;
            ("thm6", serde_json::to_value(input)?, r)
        }
        RegionTheorem::CpmB => {
            fixed_kappa()?;
            let input: CpmInputB = read_json(input_path, "input")?;
            let r = check_thm7_cpm(&model, &ch, &input)?;
            ("thm7", serde_json::to_value(input)?, r)
        }
        RegionTheorem::Crbc => {
            let input: CrbcInput = read_json(input_path, "input")?;
            let r = check_crbc(&model, &ch, &input, kappa)?;
            ("crbc", serde_json::to_value(input)?, r)
        }
    };
    println!("{name} at kappa = {kappa}:");
    print_conditions(&report);
    println!("all conditions hold: {}", report.all_satisfied);
    let config =
        json!({ "files": paths(c), "kappa": kappa, "model": model, "channel": ch, "input": input });
    Output::new(c.out.clone())?.json(
        &format!("region-{name}.json"),
        &envelope("region", config, &report)?,
    )?;
    Ok(Outcome::from_pass(report.all_satisfied))
}

pub fn outer(theorem: OuterTheorem, c: &Common) -> Result<Outcome> {
    let model = load_model(c)?;
    let ch = load_channel(c)?;
    let kappa = c.kappa.unwrap_or(1.0);
    let mut search: SearchConfig = match &c.config {
        Some(p) => read_json(p, "search config")?,
        None => SearchConfig::default(),
    };
    if let Some(s) = c.seed {
        search.seed = s;
    }
    let (name, report) = match theorem {
        OuterTheorem::Destination => ("thm2", check_outer_thm2(&model, &ch, kappa, &search)?),
        OuterTheorem::Relay => ("thm3", check_outer_thm3_relay(&model, &ch, kappa, &search)?),
    };
    let verdict = report.verdict.unwrap_or(OuterVerdict::Inconclusive);
    println!("{name} at kappa = {kappa}:");
    print_conditions(&report);
    match verdict {
        OuterVerdict::Violated => println!("verdict: violated (not achievable)"),
        OuterVerdict::Inconclusive => println!("verdict: inconclusive (never violated)"),
    }
    let config = json!({ "files": paths(c), "kappa": kappa, "search": search, "model": model, "channel": ch });
    Output::new(c.out.clone())?.json(
        &format!("outer-{name}.json"),
        &envelope("outer", config, &report)?,
    )?;
    Ok(Outcome::from_pass(verdict == OuterVerdict::Inconclusive))
}

/// Fading configuration file: either bare channel parameters or the full
/// form below.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FadingConfig {
    params: FadingMarcParams,
    #[serde(default)]
    entropies: Option<SourceEntropies>,
    #[serde(default)]
    mabrc: bool,
    #[serde(default)]
    mc: McConfig,
    #[serde(default)]
    kappa: Option<f64>,
}

fn load_fading(c: &Common) -> Result<FadingConfig> {
    let path = required(&c.config, "config")?;
    let raw: Value = read_json(path, "fading config")?;
    let parsed = if raw.get("params").is_some() {
        serde_json::from_value(raw)
    } else {
        serde_json::from_value(raw).map(|params| FadingConfig {
            params,
            entropies: None,
            mabrc: false,
            mc: McConfig::default(),
            kappa: None,
        })
    };
    let mut cfg =
        parsed.with_context(|| format!("invalid fading config file {}", path.display()))?;
    cfg.params.validate()?;
    if let Some(s) = c.seed {
        cfg.mc.seed = s;
    }
    if let Some(t) = c.trials {
        cfg.mc.samples = t;
    }
    if let Some(k) = c.kappa {
        cfg.kappa = Some(k);
    }
    Ok(cfg)
}

pub fn fading(check: FadingCheck, c: &Common) -> Result<Outcome> {
    let cfg = load_fading(c)?;
    let p = &cfg.params;
    let kappa = cfg.kappa.unwrap_or(1.0);
    let out = Output::new(c.out.clone())?;
    let (name, result, outcome) = match check {
        FadingCheck::Df => {
            let (df, bounds) = match p.kind {
                FadingKind::Phase => (phase_df_conditions(p)?, None),
                FadingKind::Rayleigh => (rayleigh_df_conditions(p)?, Some(rayleigh_df_bounds(p)?)),
            };
            println!("{} fading relay-decoding conditions: {df:?}", p.kind);
            let pass = df.iter().all(|&d| d);
            (
                "df",
                json!({ "df_conditions": df, "df_conditions_hold": pass, "bounds": bounds }),
                pass,
            )
        }
        FadingCheck::Region => {
            let (df, th) = match p.kind {
                FadingKind::Phase => (phase_df_conditions(p)?, (phase_region(p, kappa)?, [0.0; 3])),
                FadingKind::Rayleigh => {
                    let t = rayleigh_region(p, kappa, &cfg.mc)?;
                    (rayleigh_df_conditions(p)?, (t.bits, t.std_error))
                }
            };
            let th_str: Vec<String> = th.0.iter().map(|t| format!("{t:.3}")).collect();
            println!(
                "{} fading thresholds at kappa = {kappa}: ({})",
                p.kind,
                th_str.join(", ")
            );
            println!("relay-decoding conditions: {df:?}");
            let pass = df.iter().all(|&d| d);
            let result = json!({
                "df_conditions": df,
                "df_conditions_hold": pass,
                "thresholds": th.0,
                "threshold_std_error": th.1,
            });
            ("region", result, pass)
        }
        FadingCheck::Separation => {
            let e = match (&c.model, cfg.entropies) {
                (Some(_), _) => SourceEntropies::from_model(&load_model(c)?),
                (None, Some(e)) => e,
                (None, None) => {
                    bail!("separation check needs --model or \"entropies\" in the fading config")
                }
            };
            let r = check_separation_optimal(&e, p, kappa, cfg.mabrc, &cfg.mc)?;
            for cond in &r.conditions {
                println!(
                    "  {:<16} {:>9.4} vs {:>9.4}  margin {:>+8.4}",
                    cond.label, cond.lhs_bits, cond.rhs_bits, cond.margin_bits
                );
            }
            println!("verdict: {:?}", r.verdict);
            let pass = r.verdict == SeparationVerdict::Achievable;
            ("separation", serde_json::to_value(&r)?, pass)
        }
    };
    out.json(
        &format!("fading-{name}.json"),
        &envelope(
            "fading",
            json!({ "files": paths(c), "resolved": cfg }),
            result,
        )?,
    )?;
    Ok(Outcome::from_pass(outcome))
}

#[derive(Serialize)]
struct BlockRow {
    block: usize,
    relay_errors: u64,
    dest_errors: u64,
    first_errors: u64,
}

#[derive(Serialize)]
struct SweepRow {
    offset_bits: f64,
    margin_bits: f64,
    p_err: f64,
    lower: f64,
    upper: f64,
    trials: u64,
}

fn block_rows(r: &SimReport) -> Vec<BlockRow> {
    r.per_block
        .iter()
        .zip(&r.first_error_block)
        .map(|(b, &f)| BlockRow {
            block: b.block,
            relay_errors: b.relay_errors,
            dest_errors: b.dest_errors,
            first_errors: f,
        })
        .collect()
}

fn print_sim(r: &SimReport) {
    println!(
        "{}: {} trials, p_err = {:.4} [{:.4}, {:.4}] ({:?}), relay failures {:.4}",
        r.scheme,
        r.trials,
        r.p_err_estimate,
        r.interval.lower,
        r.interval.upper,
        r.criterion,
        r.relay_error_fraction
    );
    for n in &r.notes {
        println!("  note: {n}");
    }
}

pub fn simulate(scheme: SimScheme, sweep: &[f64], c: &Common) -> Result<Outcome> {
    let model = load_model(c)?;
    let ch = load_channel(c)?;
    let input_path = required(&c.input, "input")?;
    let mut cfg: BlockMarkovConfig =
        read_json(required(&c.config, "config")?, "block-Markov config")?;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if c.epsilon.is_some() {
        cfg.epsilon = c.epsilon;
    }
    cfg.validate()?;
    if let Some(k) = c.kappa {
        cfg.check_kappa(k)?;
    }
    let trials = c.trials.unwrap_or(DEFAULT_TRIALS);
    let out = Output::new(c.out.clone())?;
    let tag = match scheme {
        SimScheme::Sep => "sep",
        SimScheme::CpmA => "cpm-a",
        SimScheme::CpmB => "cpm-b",
    };
    let config = |input: Value| json!({ "files": paths(c), "block_markov": cfg, "trials": trials, "sweep": sweep, "input": input });
    if !sweep.is_empty() {
        if scheme != SimScheme::Sep {
            bail!("--sweep: margin sweeps are available for the separation scheme only");
        }
        let input: SeparationInput = read_json(input_path, "input")?;
        let configs: Vec<BlockMarkovConfig> = sweep
            .iter()
            .map(|&d| BlockMarkovConfig {
                rates: cfg.rates.shifted(d),
                ..cfg.clone()
            })
            .collect();
        let (points, reports) = separation_margin_sweep(&model, &ch, &input, &configs, trials)?;
        for (d, pt) in sweep.iter().zip(&points) {
            println!(
                "offset {d:+.3}: margin {:+.4} bits, p_err = {:.4} [{:.4}, {:.4}]",
                pt.margin_bits, pt.p_err, pt.interval.lower, pt.interval.upper
            );
        }
        let result = json!({ "points": points, "reports": reports });
        out.json(
            "simulate-sep-sweep.json",
            &envelope("simulate", config(serde_json::to_value(&input)?), result)?,
        )?;
        if c.csv {
            out.csv(
                "simulate-sep-sweep.csv",
                sweep.iter().zip(&points).map(|(&d, p)| SweepRow {
                    offset_bits: d,
                    margin_bits: p.margin_bits,
                    p_err: p.p_err,
                    lower: p.interval.lower,
                    upper: p.interval.upper,
                    trials: p.trials,
                }),
            )?;
        }
        return Ok(Outcome::Pass);
    }
    let (input, report) = match scheme {
        SimScheme::Sep => {
            let input: SeparationInput = read_json(input_path, "input")?;
            let r = run_separation_df(&model, &ch, &input, &cfg, trials)?;
            (serde_json::to_value(&input)?, r)
        }
        SimScheme::CpmA => {
            let input: CpmInputA = read_json(input_path, "input")?;
            let r = run_cpm_scheme_a(&model, &ch, &input, &cfg, trials)?;
            (serde_json::to_value(&input)?, r)
        }
        SimScheme::CpmB => {
            let input: CpmInputB = read_json(input_path, "input")?;
            let r = run_cpm_scheme_b(&model, &ch, &input, &cfg, trials)?;
            (serde_json::to_value(&input)?, r)
        }
    };
    print_sim(&report);
    out.json(
        &format!("simulate-{tag}.json"),
        &envelope("simulate", config(input), &report)?,
    )?;
    if c.csv {
        out.csv(&format!("simulate-{tag}-blocks.csv"), block_rows(&report))?;
    }
    Ok(Outcome::Pass)
}

pub fn somarc_demo(c: &Common) -> Result<Outcome> {
    let trials = c.trials.unwrap_or(DEMO_TRIALS);
    let seed = c.seed.unwrap_or(0);
    let report = run_uncoded_somarc(trials, seed)?;
    let errors = report.dest_trial_errors;
    let search = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    let bound = sum_rate_bound(&search)?;
    println!("uncoded X1 = S1, X2 = S2 over {trials} trials");
    println!("errors: {errors}");
    println!("sum-capacity bound ≈ {:.3}", bound.best_value_bits);
    println!("H(S1,S2) = {:.3} bits", 3f64.log2());
    let result = json!({
        "simulation": report,
        "sum_capacity_bound_bits": bound.best_value_bits,
        "sum_capacity_witness": bound.best_distribution,
        "source_entropy_bits": 3f64.log2(),
    });
    let config = json!({ "trials": trials, "seed": seed, "search": search });
    Output::new(c.out.clone())?.json(
        "somarc-demo.json",
        &envelope("somarc-demo", config, result)?,
    )?;
    Ok(Outcome::from_pass(errors == 0))
}
