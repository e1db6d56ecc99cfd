//! The three-stage closed-form estimator: beat-chain coarse range, weighted
//! residual correction, and least-squares refinement over all wavelengths.

use std::f64::consts::{PI, TAU};

use super::chain::coarse_estimate;
use super::{ensure_same_plan, to_int, EstimateTrace, Estimator, PreparedEstimator};
use crate::error::{Error, Result};
use crate::observation::PhaseObservation;
use crate::phase::{cycles, round_half_away, wrap_unchecked};
use crate::plan::FrequencyPlan;

/// Removes the coarse range from every phase: `φ̃_i = [φ_i - 2πL_c/λ_i]`.
pub fn compensate_phases(obs: &PhaseObservation<'_>, l_c: f64) -> Result<Vec<f64>> {
    if !l_c.is_finite() {
        return Err(Error::invalid(format!("coarse range {l_c} is not finite")));
    }
    Ok(obs
        .phases_rad()
        .iter()
        .zip(obs.plan().wavelengths_m())
        .map(|(phi, lam)| wrap_unchecked(phi - TAU * l_c / lam))
        .collect())
}

/// The constant `(N-1)×(N-1)` weight matrix `W = ΓᵀR⁻¹Γ`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl WMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Zero-based entry; `W_{jk}` in one-based notation is `get(j-1, k-1)`.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    /// `W·x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "vector length must match W");
        (0..self.dim).map(|r| dot(self.row(r), x)).collect()
    }

    /// `aᵀ·W·b`.
    pub fn quadratic(&self, a: &[f64], b: &[f64]) -> f64 {
        dot(a, &self.apply(b))
    }
}

/// Tabulates `W_{jk} = (N·min(j,k) - j·k) / N` for `1 <= j,k <= n-1`.
pub fn build_w(n: usize) -> Result<WMatrix> {
    if n < 2 {
        return Err(Error::invalid(format!("W needs n >= 2, got {n}")));
    }
    let dim = n - 1;
    let nf = n as f64;
    let mut data = Vec::with_capacity(dim * dim);
    for j in 1..=dim {
        for k in 1..=dim {
            let (jf, kf) = (j as f64, k as f64);
            data.push((nf * jf.min(kf) - jf * kf) / nf);
        }
    }
    Ok(WMatrix { dim, data })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn adjacent_freq_steps(plan: &FrequencyPlan) -> Vec<f64> {
    plan.freqs_hz().windows(2).map(|w| w[0] - w[1]).collect()
}

fn adjacent_wrapped_diffs(compensated: &[f64]) -> Vec<f64> {
    compensated
        .windows(2)
        .map(|w| wrap_unchecked(w[0] - w[1]))
        .collect()
}

/// Inputs of the weighted residual estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSystem {
    /// `Δf_i = f_{i-1} - f_i`, `i = 1…N-1`.
    pub delta_f_hz: Vec<f64>,
    /// `Δφ̃_{i-1,i} = [φ̃_{i-1} - φ̃_i]`.
    pub delta_phi_rad: Vec<f64>,
    pub w_matrix: WMatrix,
    pub compensated_rad: Vec<f64>,
    c_m_s: f64,
}

impl ResidualSystem {
    pub fn new(compensated: &[f64], plan: &FrequencyPlan) -> Result<Self> {
        if compensated.len() != plan.len() {
            return Err(Error::invalid(format!(
                "{} compensated phases for a plan of {} frequencies",
                compensated.len(),
                plan.len()
            )));
        }
        Ok(ResidualSystem {
            delta_f_hz: adjacent_freq_steps(plan),
            delta_phi_rad: adjacent_wrapped_diffs(compensated),
            w_matrix: build_w(plan.len())?,
            compensated_rad: compensated.to_vec(),
            c_m_s: plan.c_m_s(),
        })
    }

    /// `L_r* = (c/2π)·(ΔfᵀWΔΦ̃)/(ΔfᵀWΔf)`.
    pub fn solve(&self) -> Result<f64> {
        let w_df = self.w_matrix.apply(&self.delta_f_hz);
        let denom = dot(&self.delta_f_hz, &w_df);
        if !(denom > 0.0) {
            return Err(Error::degenerate("ΔfᵀWΔf vanishes"));
        }
        Ok(self.c_m_s / TAU * dot(&w_df, &self.delta_phi_rad) / denom)
    }
}

/// Closed-form residual `L_r*` from compensated phases. Only meaningful for
/// `|L_r| < c/2B`; outside that regime a value is still returned.
pub fn residual_estimate(compensated: &[f64], plan: &FrequencyPlan) -> Result<f64> {
    ResidualSystem::new(compensated, plan)?.solve()
}

/// `m̂_i = round[L_m/λ_i - φ_i/2π]`.
pub fn fold_integers(obs: &PhaseObservation<'_>, l_m: f64) -> Vec<i64> {
    obs.phases_rad()
        .iter()
        .zip(obs.plan().wavelengths_m())
        .map(|(phi, lam)| to_int(round_half_away(l_m / lam - cycles(*phi))))
        .collect()
}

/// The fixed-branch least-squares problem `J(L) = 4π²‖Λ_inv·L - m_f‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct LsSystem {
    pub inv_wavelengths: Vec<f64>,
    /// `m_{fi} = m̂_i + φ_i/2π`.
    pub m_f: Vec<f64>,
}

impl LsSystem {
    pub fn new(obs: &PhaseObservation<'_>, fold_ints: &[i64]) -> Result<Self> {
        if fold_ints.len() != obs.len() {
            return Err(Error::invalid(format!(
                "{} folding integers for {} phases",
                fold_ints.len(),
                obs.len()
            )));
        }
        Ok(LsSystem {
            inv_wavelengths: obs.plan().wavelengths_m().iter().map(|l| 1.0 / l).collect(),
            m_f: fold_ints
                .iter()
                .zip(obs.phases_rad())
                .map(|(&m, &phi)| m as f64 + cycles(phi))
                .collect(),
        })
    }

    /// `J(L)` in rad².
    pub fn cost(&self, l: f64) -> f64 {
        4.0 * PI * PI
            * self
                .inv_wavelengths
                .iter()
                .zip(&self.m_f)
                .map(|(a, m)| (a * l - m).powi(2))
                .sum::<f64>()
    }

    /// `L* = (Λ_inv·m_fᵀ)/(Λ_inv·Λ_invᵀ)`.
    pub fn solve(&self) -> f64 {
        dot(&self.inv_wavelengths, &self.m_f) / dot(&self.inv_wavelengths, &self.inv_wavelengths)
    }
}

/// Least-squares range on the integer branch `m̂`.
pub fn ls_refine(obs: &PhaseObservation<'_>, fold_ints: &[i64]) -> Result<f64> {
    Ok(LsSystem::new(obs, fold_ints)?.solve())
}

/// The estimator bound to one plan, with `WΔf` and the normalisers
/// precomputed.
#[derive(Debug, Clone)]
pub struct Concerto<'p> {
    plan: &'p FrequencyPlan,
    w_df: Vec<f64>,
    residual_scale: f64,
    inv_lambda: Vec<f64>,
    inv_lambda_sq_sum: f64,
}

impl<'p> Concerto<'p> {
    pub fn new(plan: &'p FrequencyPlan) -> Result<Self> {
        if plan.len() < 2 {
            return Err(Error::degenerate("concerto needs at least two frequencies"));
        }
        let w = build_w(plan.len())?;
        let delta_f = adjacent_freq_steps(plan);
        let w_df = w.apply(&delta_f);
        let denom = dot(&delta_f, &w_df);
        if !(denom > 0.0 && denom.is_finite()) {
            return Err(Error::degenerate("ΔfᵀWΔf vanishes"));
        }
        let inv_lambda: Vec<f64> = plan.wavelengths_m().iter().map(|l| 1.0 / l).collect();
        let inv_lambda_sq_sum = dot(&inv_lambda, &inv_lambda);
        Ok(Concerto {
            plan,
            w_df,
            residual_scale: plan.c_m_s() / (TAU * denom),
            inv_lambda,
            inv_lambda_sq_sum,
        })
    }

    pub fn plan(&self) -> &'p FrequencyPlan {
        self.plan
    }

    pub fn estimate(&self, obs: &PhaseObservation<'_>) -> Result<EstimateTrace> {
        ensure_same_plan(self.plan, obs)?;
        let (l_coarse, m_chain) = coarse_estimate(obs)?;
        let compensated = compensate_phases(obs, l_coarse)?;
        let numer: f64 = compensated
            .windows(2)
            .zip(&self.w_df)
            .map(|(w, wd)| wd * wrap_unchecked(w[0] - w[1]))
            .sum();
        let l_residual = self.residual_scale * numer;
        let l_mid = l_coarse + l_residual;
        let fold_ints = fold_integers(obs, l_mid);
        let weighted: f64 = fold_ints
            .iter()
            .zip(obs.phases_rad())
            .zip(&self.inv_lambda)
            .map(|((&m, &phi), a)| a * (m as f64 + cycles(phi)))
            .sum();
        Ok(EstimateTrace {
            method: ConcertoEstimator.name(),
            m_chain,
            l_coarse_m: l_coarse,
            l_residual_m: l_residual,
            l_mid_m: l_mid,
            fold_ints,
            l_final_m: weighted / self.inv_lambda_sq_sum,
        })
    }
}

/// Full three-stage estimate for one observation.
pub fn concerto_estimate(obs: &PhaseObservation<'_>) -> Result<EstimateTrace> {
    Concerto::new(obs.plan())?.estimate(obs)
}

/// Registry adapter for [`Concerto`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ConcertoEstimator;

impl Estimator for ConcertoEstimator {
    fn name(&self) -> &'static str {
        "concerto"
    }

    fn prepare<'p>(&self, plan: &'p FrequencyPlan) -> Result<Box<dyn PreparedEstimator + 'p>> {
        Ok(Box::new(Concerto::new(plan)?))
    }
}

impl PreparedEstimator for Concerto<'_> {
    fn estimate(&self, obs: &PhaseObservation<'_>) -> Result<EstimateTrace> {
        Concerto::estimate(self, obs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::design_concerto_plan;
    use crate::observation::true_phases;

    fn reference_plan() -> FrequencyPlan {
        design_concerto_plan(2.5e9, 2.4e9, 51, 144.0, 3e8).unwrap()
    }

    #[test]
    fn w_small_cases() {
        let w3 = build_w(3).unwrap();
        let expect = [[2.0 / 3.0, 1.0 / 3.0], [1.0 / 3.0, 2.0 / 3.0]];
        for (j, row) in expect.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert!((w3.get(j, k) - v).abs() < 1e-15);
            }
        }
        let w2 = build_w(2).unwrap();
        assert_eq!(w2.dim(), 1);
        assert_eq!(w2.get(0, 0), 0.5);
        assert!(build_w(1).is_err());
    }

    #[test]
    fn compensation_examples() {
        let plan = reference_plan();
        let obs = true_phases(23.4, &plan).unwrap();
        assert_eq!(compensate_phases(&obs, 0.0).unwrap(), obs.phases_rad());
        assert!(compensate_phases(&obs, 23.4)
            .unwrap()
            .iter()
            .all(|p| p.abs() < 1e-9));
        let d = 0.8;
        let shifted = compensate_phases(&obs, 23.4 - d).unwrap();
        for (p, lam) in shifted.iter().zip(plan.wavelengths_m()) {
            let want = wrap_unchecked(TAU * d / lam);
            assert!(wrap_unchecked(p - want).abs() < 1e-9);
        }
        assert!(compensate_phases(&obs, f64::NAN).is_err());
    }

    #[test]
    fn residual_zero_and_exact() {
        let plan = reference_plan();
        assert_eq!(residual_estimate(&vec![0.0; 51], &plan).unwrap(), 0.0);
        for d in [-1.4, -0.3, 0.05, 1.2] {
            let phases: Vec<f64> = plan
                .wavelengths_m()
                .iter()
                .map(|lam| wrap_unchecked(TAU * d / lam))
                .collect();
            let got = residual_estimate(&phases, &plan).unwrap();
            assert!((got - d).abs() < 1e-9 * d.abs() + 1e-12, "{d} -> {got}");
        }
        assert!(residual_estimate(&[0.0; 3], &plan).is_err());
    }

    #[test]
    fn fold_integers_examples() {
        let plan = reference_plan();
        let obs = true_phases(0.0, &plan).unwrap();
        assert!(fold_integers(&obs, 0.0).iter().all(|&m| m == 0));
        let l = -33.3;
        let obs = true_phases(l, &plan).unwrap();
        let m = fold_integers(&obs, l);
        for ((mi, phi), lam) in m.iter().zip(obs.phases_rad()).zip(plan.wavelengths_m()) {
            assert!(((*mi as f64 + phi / TAU) * lam - l).abs() < 1e-9);
        }
    }

    #[test]
    fn fold_integer_tie_rounds_away_from_zero() {
        let plan = FrequencyPlan::from_wavelengths(&[1.0], 3e8).unwrap();
        let obs = PhaseObservation::new(vec![0.0], &plan, None).unwrap();
        assert_eq!(fold_integers(&obs, 2.5), vec![3]);
        assert_eq!(fold_integers(&obs, -2.5), vec![-3]);
    }

    #[test]
    fn ls_single_wavelength() {
        let plan = FrequencyPlan::from_wavelengths(&[0.3], 3e8).unwrap();
        let obs = PhaseObservation::new(vec![1.0], &plan, None).unwrap();
        let got = ls_refine(&obs, &[4]).unwrap();
        assert!((got - (4.0 + 1.0 / TAU) * 0.3).abs() < 1e-15);
        assert!(ls_refine(&obs, &[1, 2]).is_err());
    }

    #[test]
    fn concerto_noiseless_end_to_end() {
        let plan = reference_plan();
        let obs = true_phases(-12.345, &plan).unwrap();
        let t = concerto_estimate(&obs).unwrap();
        assert!((t.l_final_m + 12.345).abs() < 1e-9);
        assert_eq!(t.l_mid_m, t.l_coarse_m + t.l_residual_m);
        assert_eq!(t.m_chain.len(), 50);
        assert_eq!(t.fold_ints.len(), 51);
        let zero = true_phases(0.0, &plan).unwrap();
        assert_eq!(concerto_estimate(&zero).unwrap().l_final_m, 0.0);
    }

    #[test]
    fn fast_residual_matches_residual_system() {
        let plan = reference_plan();
        let obs = true_phases(51.7, &plan).unwrap();
        let t = concerto_estimate(&obs).unwrap();
        let comp = compensate_phases(&obs, t.l_coarse_m).unwrap();
        let slow = residual_estimate(&comp, &plan).unwrap();
        assert!((slow - t.l_residual_m).abs() <= 1e-12 * slow.abs().max(1e-3));
    }

    #[test]
    fn prepared_rejects_foreign_plan() {
        let plan = reference_plan();
        let other = design_concerto_plan(2.5e9, 2.4e9, 51, 200.0, 3e8).unwrap();
        let c = Concerto::new(&plan).unwrap();
        let obs = true_phases(1.0, &other).unwrap();
        assert!(c.estimate(&obs).is_err());
    }
}
