use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::phase::wrap_unchecked;
use crate::plan::FrequencyPlan;

/// One wrapped phase per plan frequency, optionally with the true range.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseObservation<'a> {
    phases_rad: Vec<f64>,
    plan: &'a FrequencyPlan,
    truth_m: Option<f64>,
}

impl<'a> PhaseObservation<'a> {
    pub fn new(phases_rad: Vec<f64>, plan: &'a FrequencyPlan, truth_m: Option<f64>) -> Result<Self> {
        if phases_rad.len() != plan.len() {
            return Err(Error::invalid(format!(
                "observation has {} phases but the plan has {} frequencies",
                phases_rad.len(),
                plan.len()
            )));
        }
        if let Some((i, p)) = phases_rad
            .iter()
            .enumerate()
            .find(|(_, p)| !(**p > -PI && **p <= PI))
        {
            return Err(Error::invalid(format!("phase {i} = {p} is outside (-pi, pi]")));
        }
        if let Some(l) = truth_m {
            if !l.is_finite() {
                return Err(Error::invalid("ground-truth range must be finite"));
            }
        }
        Ok(PhaseObservation {
            phases_rad,
            plan,
            truth_m,
        })
    }

    /// Caller guarantees length and range.
    pub(crate) fn new_unchecked(phases_rad: Vec<f64>, plan: &'a FrequencyPlan, truth_m: Option<f64>) -> Self {
        debug_assert_eq!(phases_rad.len(), plan.len());
        PhaseObservation {
            phases_rad,
            plan,
            truth_m,
        }
    }

    pub fn phases_rad(&self) -> &[f64] {
        &self.phases_rad
    }

    pub fn plan(&self) -> &'a FrequencyPlan {
        self.plan
    }

    pub fn truth_m(&self) -> Option<f64> {
        self.truth_m
    }

    pub fn len(&self) -> usize {
        self.phases_rad.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases_rad.is_empty()
    }
}

/// Beat phases `Φ_i = [φ_0 - φ_i]` and beat wavelengths `Λ_i`, `i = 1…N-1`.
/// Element `k` of each vector belongs to `i = k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeatSet {
    pub beat_phases_rad: Vec<f64>,
    pub beat_wavelengths_m: Vec<f64>,
}

impl BeatSet {
    pub fn len(&self) -> usize {
        self.beat_phases_rad.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beat_phases_rad.is_empty()
    }
}

/// Forms the beat phases and wavelengths of an observation.
///
/// `Λ_i` is evaluated as `c / (f_0 - f_i)`, the same quantity as
/// `λ_i λ_0 / (λ_i - λ_0)` but without cancelling two nearly equal
/// wavelengths.
pub fn beat_set(obs: &PhaseObservation<'_>) -> Result<BeatSet> {
    let plan = obs.plan();
    let freqs = plan.freqs_hz();
    let c = plan.c_m_s();
    let phases = obs.phases_rad();
    let Some((&f0, rest)) = freqs.split_first() else {
        return Err(Error::degenerate("empty plan"));
    };
    let mut beat_phases_rad = Vec::with_capacity(rest.len());
    let mut beat_wavelengths_m = Vec::with_capacity(rest.len());
    for (i, &fi) in rest.iter().enumerate() {
        let df = f0 - fi;
        if df == 0.0 {
            return Err(Error::degenerate(format!(
                "wavelength {} equals wavelength 0; beat wavelength is infinite",
                i + 1
            )));
        }
        beat_phases_rad.push(wrap_unchecked(phases[0] - phases[i + 1]));
        beat_wavelengths_m.push(c / df);
    }
    Ok(BeatSet {
        beat_phases_rad,
        beat_wavelengths_m,
    })
}

/// Noise-free phases `φ_i = [2πL/λ_i]` for range `L`.
pub fn true_phases(range_m: f64, plan: &FrequencyPlan) -> Result<PhaseObservation<'_>> {
    if !range_m.is_finite() {
        return Err(Error::invalid(format!("range {range_m} is not finite")));
    }
    let phases = plan
        .wavelengths_m()
        .iter()
        .map(|lam| wrap_unchecked(TAU * range_m / lam))
        .collect();
    Ok(PhaseObservation::new_unchecked(phases, plan, Some(range_m)))
}
