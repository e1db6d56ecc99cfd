//! Subcommand bodies. Each returns the full text destined for the output.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use unwrap_kit::sim::{
    rng, snr_threshold, sweep_range as run_range_sweep, sweep_snr, synthesize_observation, write_sweep_csv,
    RangeSweep, ThresholdSearch, TrialConfig, TruthPolicy,
};
use unwrap_kit::theory::{crb as crb_m2, snr_to_sigma};
use unwrap_kit::{
    design_bw_plan, design_concerto_plan, EstimatorRegistry, FrequencyPlan, NoiseSpec, PhaseObservation,
    SPEED_OF_LIGHT,
};

use crate::config::{float_list, int_list, required, Settings};
use crate::error::{CliError, CliResult};
use crate::fmt::{ints, num};
use crate::planfile;
use crate::{DesignArgs, PlanArgs, TruthArgs};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_TRIALS: u64 = 10_000;
const DEFAULT_METHODS: &[&str] = &["concerto", "bw", "ef"];
const DEFAULT_BENCH_SNR_DB: f64 = 20.0;

pub struct Context {
    pub settings: Settings,
    pub quiet: bool,
}

impl Context {
    fn progress(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

/// Flag values as a settings layer over the file.
#[derive(Default)]
struct Flags<'a> {
    design: Option<&'a DesignArgs>,
    snr_db: Option<&'a str>,
    methods: Option<&'a str>,
    n_list: Option<&'a str>,
    k_list: Option<&'a str>,
    truth: Option<&'a TruthArgs>,
    p_threshold: Option<f64>,
}

impl Flags<'_> {
    fn settings(&self, base: &Settings) -> CliResult<Settings> {
        let mut s = Settings::default();
        if let Some(d) = self.design {
            s.f_high_hz = d.f_high;
            s.f_low_hz = d.f_low;
            s.n_freq = d.n;
            s.range_k_m = d.k;
            s.c_m_s = d.c;
        }
        s.snr_db_list = self.snr_db.map(|v| float_list("snr_db_list", v)).transpose()?;
        s.methods = self.methods.map(|v| v.split(',').map(|m| m.trim().to_string()).collect());
        s.n_list = self.n_list.map(|v| int_list("n_list", v)).transpose()?;
        s.k_list_m = self.k_list.map(|v| float_list("k_list_m", v)).transpose()?;
        if let Some(t) = self.truth {
            s.truth_policy = t.truth_policy.clone();
            s.truth_m = t.truth_m;
        }
        s.p_threshold = self.p_threshold;
        Ok(base.clone().overlay(s))
    }
}

fn c_of(s: &Settings) -> f64 {
    s.c_m_s.unwrap_or(SPEED_OF_LIGHT)
}

fn resolve_plan(s: &Settings, args: &PlanArgs) -> CliResult<FrequencyPlan> {
    if let Some(path) = &args.plan {
        return planfile::load(path);
    }
    let f_high = required(&s.f_high_hz, "f_high_hz")?;
    let f_low = required(&s.f_low_hz, "f_low_hz")?;
    let n = required(&s.n_freq, "n_freq")?;
    let plan = match args.pattern.as_str() {
        "concerto" => design_concerto_plan(f_high, f_low, n, required(&s.range_k_m, "range_k_m")?, c_of(s))?,
        "bw" => design_bw_plan(f_high, f_high - f_low, n, c_of(s))?,
        other => return Err(CliError::usage(format!("unknown pattern `{other}` (expected concerto or bw)"))),
    };
    Ok(plan)
}

fn truth_policy(s: &Settings) -> CliResult<TruthPolicy> {
    let policy = match s.truth_policy.as_deref() {
        None | Some("uniform") => TruthPolicy::uniform(),
        Some("full") => TruthPolicy::full_range(),
        Some("fixed") => TruthPolicy::Fixed(required(&s.truth_m, "truth_m")?),
        Some(other) => match other.strip_prefix("uniform:").map(str::parse::<f64>) {
            Some(Ok(fraction)) => TruthPolicy::Uniform { fraction },
            _ => {
                return Err(CliError::usage(format!(
                    "unknown truth_policy `{other}` (expected uniform, uniform:<fraction>, full or fixed)"
                )))
            }
        },
    };
    Ok(policy)
}

fn methods(s: &Settings, default: &[&str]) -> Vec<String> {
    s.methods
        .clone()
        .unwrap_or_else(|| default.iter().map(|m| m.to_string()).collect())
}

fn single_snr(s: &Settings) -> CliResult<Option<f64>> {
    match s.snr_db_list.as_deref() {
        None => Ok(None),
        Some([x]) => Ok(Some(*x)),
        Some(_) => Err(CliError::usage("exactly one SNR value expected")),
    }
}

pub fn design(ctx: &Context, args: &PlanArgs) -> CliResult<String> {
    let s = Flags {
        design: Some(&args.design),
        ..Flags::default()
    }
    .settings(&ctx.settings)?;
    Ok(planfile::render(&resolve_plan(&s, args)?))
}

pub fn estimate(
    ctx: &Context,
    args: &PlanArgs,
    method: &str,
    phases: Option<&str>,
    range: Option<f64>,
    snr_db: Option<&str>,
) -> CliResult<String> {
    let s = Flags {
        design: Some(&args.design),
        snr_db,
        ..Flags::default()
    }
    .settings(&ctx.settings)?;
    let plan = resolve_plan(&s, args)?;
    let estimator = EstimatorRegistry::with_builtins().lookup(method).map_err(CliError::from)?;
    let obs = match (phases, range) {
        (Some(list), _) => PhaseObservation::new(float_list("phases", list)?, &plan, None)?,
        (None, Some(l)) => {
            let noise = match single_snr(&s)? {
                Some(snr) => NoiseSpec::from_snr_db(snr)?,
                None => NoiseSpec::noiseless(),
            };
            let mut stream = rng::trial_stream(s.seed.unwrap_or(DEFAULT_SEED), 0);
            synthesize_observation(l, &plan, &noise, &mut stream)?
        }
        (None, None) => return Err(CliError::usage("estimate needs --phases or --range")),
    };
    let trace = estimator.estimate(&obs)?;
    let mut out = String::new();
    let rows: Vec<(&str, String)> = vec![
        ("method", trace.method.to_string()),
        ("n_freq", plan.len().to_string()),
        ("l_coarse_m", num(trace.l_coarse_m)),
        ("l_residual_m", num(trace.l_residual_m)),
        ("l_mid_m", num(trace.l_mid_m)),
        ("l_final_m", num(trace.l_final_m)),
        ("m_chain", ints(&trace.m_chain)),
        ("fold_ints", ints(&trace.fold_ints)),
    ];
    for (k, v) in rows {
        writeln!(out, "{k},{v}").unwrap();
    }
    if let Some(err) = trace.error_m(&obs) {
        writeln!(out, "truth_m,{}", num(obs.truth_m().unwrap())).unwrap();
        writeln!(out, "error_m,{}", num(err)).unwrap();
    }
    Ok(out)
}

pub fn crb(ctx: &Context, args: &PlanArgs, snr_db: Option<&str>) -> CliResult<String> {
    let s = Flags {
        design: Some(&args.design),
        snr_db,
        ..Flags::default()
    }
    .settings(&ctx.settings)?;
    let plan = resolve_plan(&s, args)?;
    let mut out = String::from("snr_db,sigma_rad,crb_m2,rmse_m\n");
    for snr in required(&s.snr_db_list, "snr_db_list")? {
        let bound = crb_m2(&plan, &NoiseSpec::from_snr_db(snr)?)?;
        writeln!(out, "{},{},{},{}", num(snr), num(snr_to_sigma(snr)), num(bound), num(bound.sqrt())).unwrap();
    }
    Ok(out)
}

pub fn simulate(
    ctx: &Context,
    args: &PlanArgs,
    snr_db: Option<&str>,
    method_list: Option<&str>,
    truth: &TruthArgs,
) -> CliResult<String> {
    let s = Flags {
        design: Some(&args.design),
        snr_db,
        methods: method_list,
        truth: Some(truth),
        ..Flags::default()
    }
    .settings(&ctx.settings)?;
    let plan = resolve_plan(&s, args)?;
    let snrs = required(&s.snr_db_list, "snr_db_list")?;
    let names = methods(&s, DEFAULT_METHODS);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let trials = s.trials.unwrap_or(DEFAULT_TRIALS);
    let cfg = TrialConfig::new(plan, NoiseSpec::noiseless(), trials, s.seed.unwrap_or(DEFAULT_SEED), &refs)
        .with_truth(truth_policy(&s)?);
    ctx.progress(&format!(
        "simulate: {} SNR points x {} methods, {trials} trials each",
        snrs.len(),
        refs.len()
    ));
    let table = sweep_snr(&cfg, &snrs, &EstimatorRegistry::with_builtins())?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &table)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

pub fn sweep_range(
    ctx: &Context,
    design: &DesignArgs,
    n_list: Option<&str>,
    k_list: Option<&str>,
    snr_db: Option<&str>,
    truth: &TruthArgs,
) -> CliResult<String> {
    let s = Flags {
        design: Some(design),
        n_list,
        k_list,
        snr_db,
        truth: Some(truth),
        ..Flags::default()
    }
    .settings(&ctx.settings)?;
    let f_high = required(&s.f_high_hz, "f_high_hz")?;
    let f_low = required(&s.f_low_hz, "f_low_hz")?;
    let ns = match &s.n_list {
        Some(list) => list.clone(),
        None => vec![required(&s.n_freq, "n_list")?],
    };
    let ks = required(&s.k_list_m, "k_list_m")?;
    let snrs = required(&s.snr_db_list, "snr_db_list")?;
    let registry = EstimatorRegistry::with_builtins();
    let mut out = String::from("n_freq,snr_db,k_m,n_trials,p_coarse_fail,p_coarse_stderr,p_fail_lambda0,p_fail_stderr,mse_m2\n");
    for &n in &ns {
        for &snr in &snrs {
            ctx.progress(&format!("sweep-range: N = {n}, {} dB, {} budgets", num(snr), ks.len()));
            let params = RangeSweep {
                f_high_hz: f_high,
                f_low_hz: f_low,
                n_freq: n,
                k_list_m: ks.clone(),
                snr_db: snr,
                trials: s.trials.unwrap_or(DEFAULT_TRIALS),
                seed: s.seed.unwrap_or(DEFAULT_SEED),
                c_m_s: c_of(&s),
                truth: truth_policy(&s)?,
            };
            for row in run_range_sweep(&params, &registry)?.rows {
                let lead = format!("{n},{},{}", num(snr), num(row.param));
                match row.outcome {
                    Ok(st) => writeln!(
                        out,
                        "{lead},{},{},{},{},{},{}",
                        st.n_trials,
                        st.p_coarse_fail.map(num).unwrap_or_default(),
                        st.p_coarse_stderr.map(num).unwrap_or_default(),
                        num(st.p_fail_lambda0),
                        num(st.p_fail_stderr),
                        num(st.mse_m2)
                    ),
                    Err(msg) => writeln!(out, "# error at n_freq={n},k_m={}: {msg}\n{lead},0,,,,,", num(row.param)),
                }
                .unwrap();
            }
        }
    }
    Ok(out)
}

pub fn threshold(
    ctx: &Context,
    design: &DesignArgs,
    n_list: Option<&str>,
    snr_db: Option<&str>,
    p_threshold: Option<f64>,
    truth: &TruthArgs,
) -> CliResult<String> {
    let s = Flags {
        design: Some(design),
        n_list,
        snr_db,
        p_threshold,
        truth: Some(truth),
        ..Flags::default()
    }
    .settings(&ctx.settings)?;
    let ns = match &s.n_list {
        Some(list) => list.clone(),
        None => vec![required(&s.n_freq, "n_list")?],
    };
    let grid = s
        .snr_db_list
        .clone()
        .unwrap_or_else(|| (0..=40).map(f64::from).collect());
    let registry = EstimatorRegistry::with_builtins();
    let mut out = String::from("n_freq,threshold_db,p_fail_at_threshold,points_scanned\n");
    for n in ns {
        ctx.progress(&format!("threshold: N = {n}"));
        let search = ThresholdSearch {
            f_high_hz: required(&s.f_high_hz, "f_high_hz")?,
            f_low_hz: required(&s.f_low_hz, "f_low_hz")?,
            range_k_m: required(&s.range_k_m, "range_k_m")?,
            c_m_s: c_of(&s),
            n_freq: n,
            snr_grid_db: grid.clone(),
            trials: s.trials.unwrap_or(DEFAULT_TRIALS),
            seed: s.seed.unwrap_or(DEFAULT_SEED),
            p_threshold: s.p_threshold.unwrap_or(ThresholdSearch::DEFAULT_P_THRESHOLD),
            truth: truth_policy(&s)?,
        };
        let result = snr_threshold(&search, &registry)?;
        let scanned = result.scanned.len();
        match result.threshold_db {
            Some(t) => {
                let p = result.scanned.last().map(|&(_, p)| p).unwrap_or(f64::NAN);
                writeln!(out, "{n},{},{},{scanned}", num(t), num(p))
            }
            None => writeln!(out, "{n},above_grid,,{scanned}"),
        }
        .unwrap();
    }
    Ok(out)
}

pub fn bench(ctx: &Context, args: &PlanArgs, method_list: Option<&str>, snr_db: Option<&str>) -> CliResult<String> {
    let s = Flags {
        design: Some(&args.design),
        methods: method_list,
        snr_db,
        ..Flags::default()
    }
    .settings(&ctx.settings)?;
    let plan = resolve_plan(&s, args)?;
    let noise = NoiseSpec::from_snr_db(single_snr(&s)?.unwrap_or(DEFAULT_BENCH_SNR_DB))?;
    let count = s.trials.unwrap_or(DEFAULT_TRIALS);
    let seed = s.seed.unwrap_or(DEFAULT_SEED);
    let k = plan.range_budget_m();
    let observations = (0..count)
        .map(|t| {
            let mut stream = rng::trial_stream(seed, t);
            let l = TruthPolicy::uniform().draw(&plan, &mut stream);
            synthesize_observation(l, &plan, &noise, &mut stream)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let registry = EstimatorRegistry::with_builtins();
    let mut out = String::from("method,n_freq,range_k_m,estimates,us_per_estimate,estimates_per_s\n");
    for name in methods(&s, DEFAULT_METHODS) {
        ctx.progress(&format!("bench: {name}, {count} estimates"));
        let est = registry.lookup(&name)?.prepare(&plan)?;
        let mut best = f64::INFINITY;
        for _ in 0..3 {
            let start = Instant::now();
            for obs in &observations {
                black_box(est.estimate(black_box(obs))?);
            }
            best = best.min(start.elapsed().as_secs_f64());
        }
        let per = best / count.max(1) as f64;
        writeln!(
            out,
            "{name},{},{},{count},{},{}",
            plan.len(),
            num(k),
            num(per * 1e6),
            num(1.0 / per)
        )
        .unwrap();
    }
    Ok(out)
}
