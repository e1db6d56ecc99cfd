//! Independent reference computations for the integration suites.
#![allow(dead_code)]

use std::f64::consts::TAU;

use unwrap_kit::estimators::LsSystem;
use unwrap_kit::{design_concerto_plan, FrequencyPlan, PhaseObservation};

pub fn reference_plan() -> FrequencyPlan {
    design_concerto_plan(2.5e9, 2.4e9, 51, 144.0, 3e8).unwrap()
}

pub fn plan_with_budget(k: f64) -> FrequencyPlan {
    design_concerto_plan(2.5e9, 2.4e9, 51, k, 3e8).unwrap()
}

/// `ΓᵀR⁻¹Γ` by explicit products: `Γ` lower-triangular ones and
/// `R⁻¹ = I - uuᵀ/N`, both `(N-1)×(N-1)`.
pub fn gamma_r_gamma(n: usize) -> Vec<Vec<f64>> {
    let d = n - 1;
    let gamma: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if j <= i { 1.0 } else { 0.0 }).collect())
        .collect();
    let r_inv: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64)
                .collect()
        })
        .collect();
    let matmul = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        (0..d)
            .map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    };
    let gamma_t: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| gamma[j][i]).collect()).collect();
    matmul(&matmul(&gamma_t, &r_inv), &gamma)
}

/// Residual estimate through an explicit weight matrix.
pub fn residual_with_matrix(compensated: &[f64], plan: &FrequencyPlan, w: &[Vec<f64>]) -> f64 {
    let f = plan.freqs_hz();
    let df: Vec<f64> = f.windows(2).map(|p| p[0] - p[1]).collect();
    let dphi: Vec<f64> = compensated
        .windows(2)
        .map(|p| unwrap_kit::wrap_diff(p[0], p[1]).unwrap())
        .collect();
    let quad = |a: &[f64], b: &[f64]| -> f64 {
        (0..a.len())
            .map(|i| (0..b.len()).map(|j| a[i] * w[i][j] * b[j]).sum::<f64>())
            .sum()
    };
    plan.c_m_s() / TAU * quad(&df, &dphi) / quad(&df, &df)
}

/// Minimiser of the fixed-branch `J(L)` over `[center - half, center + half]`
/// by a uniform grid and a parabola through the best point and neighbours.
pub fn ls_grid_minimizer(obs: &PhaseObservation<'_>, fold_ints: &[i64], center: f64, half: f64) -> f64 {
    let sys = LsSystem::new(obs, fold_ints).unwrap();
    let steps = 4000;
    let h = 2.0 * half / steps as f64;
    let xs: Vec<f64> = (0..=steps).map(|i| center - half + i as f64 * h).collect();
    let js: Vec<f64> = xs.iter().map(|&x| sys.cost(x)).collect();
    let (k, _) = js
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let k = k.clamp(1, steps - 1);
    let (y0, y1, y2) = (js[k - 1], js[k], js[k + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    xs[k] + 0.5 * h * (y0 - y2) / denom
}
