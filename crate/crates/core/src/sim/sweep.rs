use super::{run_trials, MethodStats, TrialConfig, TruthPolicy};
use crate::design::design_concerto_plan;
use crate::error::{Error, Result};
use crate::estimators::EstimatorRegistry;
use crate::noise::NoiseSpec;

/// One row of a sweep: the swept value and either the method's metrics or
/// the reason the point could not be run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub method: String,
    pub outcome: std::result::Result<MethodStats, String>,
}

/// Rows of a sweep in run order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn stats(&self, method: &str, param: f64) -> Option<&MethodStats> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.param == param)
            .and_then(|r| r.outcome.as_ref().ok())
    }
}

/// Runs `cfg` once per SNR. Every point reuses the same seed, so points share
/// their ranges and standard-normal draws and differ only in `σ`.
pub fn sweep_snr(cfg: &TrialConfig, snr_db_list: &[f64], registry: &EstimatorRegistry) -> Result<SweepTable> {
    cfg.validate(registry)?;
    let mut table = SweepTable::default();
    for &snr in snr_db_list {
        let point = cfg.clone().with_noise(NoiseSpec::from_snr_db(snr)?);
        let report = run_trials(&point, registry)?;
        table.rows.extend(report.rows.into_iter().map(|stats| SweepRow {
            param: snr,
            method: stats.method.clone(),
            outcome: Ok(stats),
        }));
    }
    Ok(table)
}

/// Coarse-stage validity versus range budget at fixed `N` and SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeSweep {
    pub f_high_hz: f64,
    pub f_low_hz: f64,
    pub n_freq: usize,
    pub k_list_m: Vec<f64>,
    pub snr_db: f64,
    pub trials: u64,
    pub seed: u64,
    pub c_m_s: f64,
    pub truth: TruthPolicy,
}

/// Designs a fresh plan per `K` and runs concerto on it. Infeasible budgets
/// produce an error row and the sweep moves on.
pub fn sweep_range(params: &RangeSweep, registry: &EstimatorRegistry) -> Result<SweepTable> {
    let noise = NoiseSpec::from_snr_db(params.snr_db)?;
    let mut table = SweepTable::default();
    for &k in &params.k_list_m {
        let outcome = match design_concerto_plan(params.f_high_hz, params.f_low_hz, params.n_freq, k, params.c_m_s) {
            Ok(plan) => {
                let cfg = TrialConfig::new(plan, noise, params.trials, params.seed, &["concerto"])
                    .with_truth(params.truth);
                let mut report = run_trials(&cfg, registry)?;
                Ok(report.rows.remove(0))
            }
            Err(e @ (Error::InfeasibleDesign(_) | Error::InvalidArgument(_))) => Err(e.to_string()),
            Err(e) => return Err(e),
        };
        table.rows.push(SweepRow {
            param: k,
            method: "concerto".into(),
            outcome,
        });
    }
    Ok(table)
}

/// Search for the SNR threshold of concerto on a designed plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSearch {
    pub f_high_hz: f64,
    pub f_low_hz: f64,
    pub range_k_m: f64,
    pub c_m_s: f64,
    pub n_freq: usize,
    /// Ascending SNR grid in dB.
    pub snr_grid_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Largest acceptable `P(|ΔL| > λ_0)`.
    pub p_threshold: f64,
    pub truth: TruthPolicy,
}

impl ThresholdSearch {
    /// Default failure-probability level.
    pub const DEFAULT_P_THRESHOLD: f64 = 1e-3;
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub n_freq: usize,
    /// First grid SNR meeting the level; `None` if the whole grid fails.
    pub threshold_db: Option<f64>,
    /// `(snr_db, p_fail)` for every point evaluated.
    pub scanned: Vec<(f64, f64)>,
}

/// Scans the grid upwards and stops at the first SNR whose failure
/// probability is at most `p_threshold`.
pub fn snr_threshold(search: &ThresholdSearch, registry: &EstimatorRegistry) -> Result<ThresholdResult> {
    if search.snr_grid_db.is_empty() {
        return Err(Error::invalid("SNR grid is empty"));
    }
    if search.snr_grid_db.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("SNR grid must be strictly ascending"));
    }
    if !(search.p_threshold > 0.0 && search.p_threshold < 1.0) {
        return Err(Error::invalid(format!("p_threshold {} not in (0, 1)", search.p_threshold)));
    }
    let plan = design_concerto_plan(
        search.f_high_hz,
        search.f_low_hz,
        search.n_freq,
        search.range_k_m,
        search.c_m_s,
    )?;
    let base = TrialConfig::new(plan, NoiseSpec::noiseless(), search.trials, search.seed, &["concerto"])
        .with_truth(search.truth);
    let mut scanned = Vec::new();
    for &snr in &search.snr_grid_db {
        let cfg = base.clone().with_noise(NoiseSpec::from_snr_db(snr)?);
        let p = run_trials(&cfg, registry)?.rows[0].p_fail_lambda0;
        scanned.push((snr, p));
        if p <= search.p_threshold {
            return Ok(ThresholdResult {
                n_freq: search.n_freq,
                threshold_db: Some(snr),
                scanned,
            });
        }
    }
    Ok(ThresholdResult {
        n_freq: search.n_freq,
        threshold_db: None,
        scanned,
    })
}
