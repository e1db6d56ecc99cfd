//! Excess fractions: exhaustive search over folding integers at the shortest
//! wavelength.

use super::{ensure_same_plan, fold_integers, ls_refine, EstimateTrace, Estimator, PreparedEstimator};
use crate::error::{Error, Result};
use crate::observation::PhaseObservation;
use crate::phase::cycles;
use crate::plan::FrequencyPlan;

/// Candidate integers `m` at `λ_0` covering `|L| < k/2`, inclusive bounds.
fn candidate_range(lam0: f64, k: f64) -> Result<(i64, i64)> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::invalid(format!("search range {k} must be finite and >= 0")));
    }
    let lo = (-k / (2.0 * lam0) - 1.0).ceil() as i64;
    let hi = (k / (2.0 * lam0) + 1.0).floor() as i64;
    if lo > hi {
        return Err(Error::invalid("empty candidate set"));
    }
    Ok((lo, hi))
}

/// Excess-fractions estimate over `|L| < k/2` (`k` should not exceed the UMR).
///
/// Each candidate `L = (m + φ_0/2π)λ_0` is scored by
/// `Σ_{i>=1} dist(L/λ_i - φ_i/2π, ℤ)²`. The lowest score wins (lowest `m` on
/// ties) and is refined by least squares on its folding integers.
pub fn ef_estimate(obs: &PhaseObservation<'_>, k: f64) -> Result<EstimateTrace> {
    let plan = obs.plan();
    let lams = plan.wavelengths_m();
    let phases = obs.phases_rad();
    let lam0 = lams[0];
    let (lo, hi) = candidate_range(lam0, k)?;

    let phi0 = cycles(phases[0]);
    // x_i(m) = L(m)/λ_i - φ_i/2π = m·slope_i + offset_i
    let (slope, offset): (Vec<f64>, Vec<f64>) = lams[1..]
        .iter()
        .zip(&phases[1..])
        .map(|(lam, phi)| {
            let a = lam0 / lam;
            (a, phi0 * a - cycles(*phi))
        })
        .unzip();

    let mut best_m = lo;
    let mut best_score = f64::INFINITY;
    for m in lo..=hi {
        let mf = m as f64;
        let score: f64 = slope
            .iter()
            .zip(&offset)
            .map(|(a, b)| {
                let x = mf * a + b;
                let d = x - x.round();
                d * d
            })
            .sum();
        if score < best_score {
            best_score = score;
            best_m = m;
        }
    }

    let l_cand = (best_m as f64 + phi0) * lam0;
    let fold_ints = fold_integers(obs, l_cand);
    let l_final = ls_refine(obs, &fold_ints)?;
    Ok(EstimateTrace {
        method: EfEstimator.name(),
        m_chain: Vec::new(),
        l_coarse_m: l_cand,
        l_residual_m: 0.0,
        l_mid_m: l_cand,
        fold_ints,
        l_final_m: l_final,
    })
}

/// Registry adapter for [`ef_estimate`]; searches the plan's range budget.
#[derive(Debug, Clone, Copy, Default)]
pub struct EfEstimator;

struct PreparedEf<'p>(&'p FrequencyPlan);

impl Estimator for EfEstimator {
    fn name(&self) -> &'static str {
        "ef"
    }

    fn prepare<'p>(&self, plan: &'p FrequencyPlan) -> Result<Box<dyn PreparedEstimator + 'p>> {
        if plan.is_empty() {
            return Err(Error::degenerate("empty plan"));
        }
        candidate_range(plan.wavelengths_m()[0], plan.range_budget_m())?;
        Ok(Box::new(PreparedEf(plan)))
    }
}

impl PreparedEstimator for PreparedEf<'_> {
    fn estimate(&self, obs: &PhaseObservation<'_>) -> Result<EstimateTrace> {
        ensure_same_plan(self.0, obs)?;
        ef_estimate(obs, self.0.range_budget_m())
    }
}
