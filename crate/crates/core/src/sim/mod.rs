//! Monte-Carlo harness: observation synthesis, trial runs and sweeps.
//!
//! Runs are reproducible: every trial draws from its own stream derived from
//! the master seed and the trial index (see [`rng`]), trials are evaluated in
//! parallel and their outcomes are reduced in trial order, so the report does
//! not depend on the thread count.

mod report;
pub mod rng;
mod stats;
mod sweep;

pub use report::{write_sweep_csv, SWEEP_CSV_HEADER};
pub use stats::binomial_stderr;
pub use sweep::{
    snr_threshold, sweep_range, sweep_snr, RangeSweep, SweepRow, SweepTable, ThresholdResult,
    ThresholdSearch,
};

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{EstimatorRegistry, PreparedEstimator};
use crate::noise::NoiseSpec;
use crate::observation::PhaseObservation;
use crate::phase::wrap_unchecked;
use crate::plan::FrequencyPlan;
use crate::theory::crb;
use stats::ErrorMoments;

/// How the true range of each trial is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruthPolicy {
    /// Same range in every trial.
    Fixed(f64),
    /// `L ~ U(-fraction·K/2, fraction·K/2)` with `K` the plan's range budget.
    Uniform { fraction: f64 },
}

impl TruthPolicy {
    /// Default fraction of the range budget covered by uniform draws.
    ///
    /// Ranges within a few noise widths of `±K/2` wrap the first beat phase,
    /// so the default keeps draws in the central half.
    pub const DEFAULT_FRACTION: f64 = 0.5;

    pub fn uniform() -> Self {
        TruthPolicy::Uniform {
            fraction: Self::DEFAULT_FRACTION,
        }
    }

    /// Uniform over the whole budget `(-K/2, K/2)`.
    pub fn full_range() -> Self {
        TruthPolicy::Uniform { fraction: 1.0 }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TruthPolicy::Fixed(l) if !l.is_finite() => {
                Err(Error::Configuration(format!("fixed truth {l} is not finite")))
            }
            TruthPolicy::Uniform { fraction } if !(fraction > 0.0 && fraction <= 1.0) => Err(
                Error::Configuration(format!("uniform truth fraction {fraction} must be in (0, 1]")),
            ),
            _ => Ok(()),
        }
    }

    /// Range for one trial.
    pub fn draw<R: Rng + ?Sized>(&self, plan: &FrequencyPlan, rng: &mut R) -> f64 {
        match *self {
            TruthPolicy::Fixed(l) => l,
            TruthPolicy::Uniform { fraction } => {
                let h = fraction * plan.range_budget_m() / 2.0;
                rng.random_range(-h..h)
            }
        }
    }
}

impl Default for TruthPolicy {
    fn default() -> Self {
        Self::uniform()
    }
}

/// Everything a Monte-Carlo run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub plan: FrequencyPlan,
    pub noise: NoiseSpec,
    pub trials: u64,
    pub seed: u64,
    pub truth: TruthPolicy,
    pub methods: Vec<String>,
}

impl TrialConfig {
    pub fn new(plan: FrequencyPlan, noise: NoiseSpec, trials: u64, seed: u64, methods: &[&str]) -> Self {
        TrialConfig {
            plan,
            noise,
            trials,
            seed,
            truth: TruthPolicy::default(),
            methods: methods.iter().map(|m| m.to_string()).collect(),
        }
    }

    pub fn with_truth(mut self, truth: TruthPolicy) -> Self {
        self.truth = truth;
        self
    }

    pub fn with_noise(mut self, noise: NoiseSpec) -> Self {
        self.noise = noise;
        self
    }

    pub fn validate(&self, registry: &EstimatorRegistry) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Configuration("trials must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Configuration("at least one method is required".into()));
        }
        for m in &self.methods {
            registry.lookup(m).map_err(|e| Error::Configuration(e.to_string()))?;
        }
        self.truth.validate()
    }
}

/// A synthesized observation together with the noise that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyObservation<'a> {
    pub observation: PhaseObservation<'a>,
    pub noise_rad: Vec<f64>,
}

impl NoisyObservation<'_> {
    /// The folding integers the unwrapper should recover:
    /// `m_i = (2πL/λ_i + θ_i - φ_i) / 2π`.
    pub fn true_fold_integers(&self) -> Vec<i64> {
        let obs = &self.observation;
        let l = obs.truth_m().expect("synthesized observations carry their truth");
        obs.plan()
            .wavelengths_m()
            .iter()
            .zip(obs.phases_rad())
            .zip(&self.noise_rad)
            .map(|((lam, phi), theta)| ((l / lam + (theta - phi) / TAU).round()) as i64)
            .collect()
    }
}

/// `φ_i = [2πL/λ_i + θ_i]` with i.i.d. `θ_i ~ N(0, σ²)`, keeping `θ`.
pub fn synthesize_with_noise<'a, R: Rng + ?Sized>(
    range_m: f64,
    plan: &'a FrequencyPlan,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<NoisyObservation<'a>> {
    if !range_m.is_finite() {
        return Err(Error::invalid(format!("range {range_m} is not finite")));
    }
    let sigma = noise.sigma_rad();
    let mut noise_rad = Vec::with_capacity(plan.len());
    let mut phases = Vec::with_capacity(plan.len());
    for lam in plan.wavelengths_m() {
        let z: f64 = rng.sample(StandardNormal);
        let theta = sigma * z;
        noise_rad.push(theta);
        phases.push(wrap_unchecked(TAU * range_m / lam + theta));
    }
    Ok(NoisyObservation {
        observation: PhaseObservation::new_unchecked(phases, plan, Some(range_m)),
        noise_rad,
    })
}

/// `φ_i = [2πL/λ_i + θ_i]` with i.i.d. `θ_i ~ N(0, σ²)`.
pub fn synthesize_observation<'a, R: Rng + ?Sized>(
    range_m: f64,
    plan: &'a FrequencyPlan,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<PhaseObservation<'a>> {
    synthesize_with_noise(range_m, plan, noise, rng).map(|n| n.observation)
}

/// Aggregated metrics of one method at one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodStats {
    pub method: String,
    pub n_trials: u64,
    /// `E[(L̂ - L)²]`.
    pub mse_m2: f64,
    pub mse_stderr_m2: f64,
    pub rmse_m: f64,
    pub mean_error_m: f64,
    pub mean_error_stderr_m: f64,
    /// Trials with `|ΔL| > λ_0`.
    pub fail_count: u64,
    pub p_fail_lambda0: f64,
    pub p_fail_stderr: f64,
    /// Trials with `|L - L_c| > c/2B`; concerto only.
    pub coarse_fail_count: Option<u64>,
    pub p_coarse_fail: Option<f64>,
    pub p_coarse_stderr: Option<f64>,
    /// `None` when the bound is undefined (noiseless runs).
    pub crb_m2: Option<f64>,
    /// Trials whose folding integers all match the truth.
    pub fold_correct_count: u64,
    /// Error statistics restricted to those trials.
    pub fold_correct_mse_m2: f64,
    pub fold_correct_mean_error_m: f64,
    pub fold_correct_mean_stderr_m: f64,
}

impl MethodStats {
    /// `10·log10(MSE)`.
    pub fn mse_db(&self) -> f64 {
        10.0 * self.mse_m2.log10()
    }
}

/// Per-method results of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub noise: NoiseSpec,
    pub rows: Vec<MethodStats>,
}

impl SimReport {
    pub fn method(&self, name: &str) -> Option<&MethodStats> {
        self.rows.iter().find(|r| r.method == name)
    }
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    error_m: f64,
    coarse_fail: bool,
    fold_correct: bool,
}

#[derive(Default)]
struct Accumulator {
    all: ErrorMoments,
    fold_correct: ErrorMoments,
    fails: u64,
    coarse_fails: u64,
}

/// Runs `cfg.trials` independent trials of every configured method.
pub fn run_trials(cfg: &TrialConfig, registry: &EstimatorRegistry) -> Result<SimReport> {
    cfg.validate(registry)?;
    let plan = &cfg.plan;
    let prepared = cfg
        .methods
        .iter()
        .map(|m| registry.lookup(m)?.prepare(plan))
        .collect::<Result<Vec<Box<dyn PreparedEstimator + '_>>>>()?;
    let half_width = plan.coarse_half_width_m();
    let lam0 = plan.wavelengths_m()[0];

    let per_trial: Vec<Vec<Outcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::trial_stream(cfg.seed, t);
            let l = cfg.truth.draw(plan, &mut rng);
            let noisy = synthesize_with_noise(l, plan, &cfg.noise, &mut rng)?;
            let truth_ints = noisy.true_fold_integers();
            prepared
                .iter()
                .map(|est| {
                    let trace = est.estimate(&noisy.observation)?;
                    Ok(Outcome {
                        error_m: trace.l_final_m - l,
                        coarse_fail: (l - trace.l_coarse_m).abs() > half_width,
                        fold_correct: trace.fold_ints == truth_ints,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut acc: Vec<Accumulator> = cfg.methods.iter().map(|_| Accumulator::default()).collect();
    for outcomes in &per_trial {
        for (a, o) in acc.iter_mut().zip(outcomes) {
            a.all.push(o.error_m);
            if o.error_m.abs() > lam0 {
                a.fails += 1;
            }
            if o.coarse_fail {
                a.coarse_fails += 1;
            }
            if o.fold_correct {
                a.fold_correct.push(o.error_m);
            }
        }
    }

    let crb_m2 = crb(plan, &cfg.noise).ok();
    let n = cfg.trials;
    let rows = cfg
        .methods
        .iter()
        .zip(acc)
        .map(|(method, a)| {
            let p_fail = a.fails as f64 / n as f64;
            let coarse = (method == "concerto").then_some(a.coarse_fails);
            let p_coarse = coarse.map(|c| c as f64 / n as f64);
            let mse = a.all.mean_sq();
            MethodStats {
                method: method.clone(),
                n_trials: n,
                mse_m2: mse,
                mse_stderr_m2: a.all.mean_sq_stderr(),
                rmse_m: mse.sqrt(),
                mean_error_m: a.all.mean(),
                mean_error_stderr_m: a.all.mean_stderr(),
                fail_count: a.fails,
                p_fail_lambda0: p_fail,
                p_fail_stderr: binomial_stderr(p_fail, n),
                coarse_fail_count: coarse,
                p_coarse_fail: p_coarse,
                p_coarse_stderr: p_coarse.map(|p| binomial_stderr(p, n)),
                crb_m2,
                fold_correct_count: a.fold_correct.n,
                fold_correct_mse_m2: a.fold_correct.mean_sq(),
                fold_correct_mean_error_m: a.fold_correct.mean(),
                fold_correct_mean_stderr_m: a.fold_correct.mean_stderr(),
            }
        })
        .collect();
    Ok(SimReport {
        noise: cfg.noise,
        rows,
    })
}
