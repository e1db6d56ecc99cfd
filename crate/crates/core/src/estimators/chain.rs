use super::{ensure_same_plan, fold_integers, to_int, EstimateTrace, Estimator, PreparedEstimator};
use crate::error::{Error, Result};
use crate::observation::{beat_set, BeatSet, PhaseObservation};
use crate::phase::{cycles, round_half_away};
use crate::plan::FrequencyPlan;

/// Runs the beat-wavelength rounding chain and returns it with the beats.
///
/// `M_1 = 0` because `|L| < Λ_1 / 2`; then
/// `M_{i+1} = round[(M_i + Φ_i/2π)·Λ_i/Λ_{i+1} - Φ_{i+1}/2π]`.
fn run_chain(obs: &PhaseObservation<'_>) -> Result<(BeatSet, Vec<f64>)> {
    if obs.len() < 2 {
        return Err(Error::degenerate("the beat chain needs at least two frequencies"));
    }
    let beats = beat_set(obs)?;
    let phi = &beats.beat_phases_rad;
    let lam = &beats.beat_wavelengths_m;
    let mut chain = Vec::with_capacity(phi.len());
    let mut m = 0.0;
    chain.push(m);
    for i in 0..phi.len() - 1 {
        m = round_half_away((m + cycles(phi[i])) * lam[i] / lam[i + 1] - cycles(phi[i + 1]));
        chain.push(m);
    }
    Ok((beats, chain))
}

fn coarse_from(beats: &BeatSet, chain: &[f64]) -> f64 {
    let last = beats.len() - 1;
    (chain[last] + cycles(beats.beat_phases_rad[last])) * beats.beat_wavelengths_m[last]
}

/// Beat folding integers `M_1 … M_{N-1}`.
pub fn bw_fold_chain(obs: &PhaseObservation<'_>) -> Result<Vec<i64>> {
    let (_, chain) = run_chain(obs)?;
    Ok(chain.into_iter().map(to_int).collect())
}

/// Coarse range `L_c = (M_{N-1} + Φ_{N-1}/2π)·Λ_{N-1}` and the chain that
/// produced it. With a correct chain, `|L - L_c| < c/2B`.
pub fn coarse_estimate(obs: &PhaseObservation<'_>) -> Result<(f64, Vec<i64>)> {
    let (beats, chain) = run_chain(obs)?;
    let l_c = coarse_from(&beats, &chain);
    Ok((l_c, chain.into_iter().map(to_int).collect()))
}

/// Classical beat-wavelength estimate, ending with the rounding step at the
/// shortest wavelength: `m_0 = round[L_c/λ_0 - φ_0/2π]`, `L = (m_0 + φ_0/2π)λ_0`.
pub fn bw_estimate(obs: &PhaseObservation<'_>) -> Result<EstimateTrace> {
    let (beats, chain) = run_chain(obs)?;
    let l_c = coarse_from(&beats, &chain);
    let lam0 = obs.plan().wavelengths_m()[0];
    let phi0 = cycles(obs.phases_rad()[0]);
    let m0 = round_half_away(l_c / lam0 - phi0);
    let l_final = (m0 + phi0) * lam0;
    Ok(EstimateTrace {
        method: BwEstimator.name(),
        m_chain: chain.into_iter().map(to_int).collect(),
        l_coarse_m: l_c,
        l_residual_m: 0.0,
        l_mid_m: l_c,
        fold_ints: fold_integers(obs, l_final),
        l_final_m: l_final,
    })
}

/// Registry adapter for [`bw_estimate`].
#[derive(Debug, Clone, Copy, Default)]
pub struct BwEstimator;

struct PreparedBw<'p>(&'p FrequencyPlan);

impl Estimator for BwEstimator {
    fn name(&self) -> &'static str {
        "bw"
    }

    fn prepare<'p>(&self, plan: &'p FrequencyPlan) -> Result<Box<dyn PreparedEstimator + 'p>> {
        if plan.len() < 2 {
            return Err(Error::degenerate("the beat chain needs at least two frequencies"));
        }
        Ok(Box::new(PreparedBw(plan)))
    }
}

impl PreparedEstimator for PreparedBw<'_> {
    fn estimate(&self, obs: &PhaseObservation<'_>) -> Result<EstimateTrace> {
        ensure_same_plan(self.0, obs)?;
        bw_estimate(obs)
    }
}
