//! Closed-form error statistics.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::noise::NoiseSpec;
use crate::plan::FrequencyPlan;

/// Deviation (in cycles) of the pre-rounding error of one beat-chain step
/// whose wavelength ratio is `Λ_i / Λ_{i+1}`.
///
/// This treats the two beat phases as independent, each with variance `2σ²`.
/// They share `φ_0`, so the exact deviation is smaller; see
/// [`chain_step_sigma_exact`].
pub fn sigma_e(sigma_rad: f64, lambda_ratio: f64) -> f64 {
    SQRT_2 * sigma_rad / (2.0 * PI) * (lambda_ratio * lambda_ratio + 1.0).sqrt()
}

/// Exact deviation of the same step error, keeping the shared `θ_0` term:
/// `(θ_0 - θ_i)ρ - (θ_0 - θ_{i+1})` has variance `σ²((ρ-1)² + ρ² + 1)`.
pub fn chain_step_sigma_exact(sigma_rad: f64, lambda_ratio: f64) -> f64 {
    let r = lambda_ratio;
    sigma_rad / (2.0 * PI) * ((r - 1.0) * (r - 1.0) + r * r + 1.0).sqrt()
}

fn inverse_square_sum(plan: &FrequencyPlan) -> f64 {
    plan.wavelengths_m().iter().map(|l| 1.0 / (l * l)).sum()
}

/// MSE of the final least-squares stage when every folding integer is right:
/// `σ² / (4π² Σ λ_k⁻²)`.
pub fn concerto_mse(plan: &FrequencyPlan, sigma_rad: f64) -> f64 {
    sigma_rad * sigma_rad / (4.0 * PI * PI * inverse_square_sum(plan))
}

/// Cramér-Rao bound on `L` (m²) under the high-SNR Gaussian phase model.
pub fn crb(plan: &FrequencyPlan, noise: &NoiseSpec) -> Result<f64> {
    let sigma = noise.sigma_rad();
    if sigma <= 0.0 {
        return Err(Error::UndefinedBound("CRB needs sigma > 0".into()));
    }
    let s = inverse_square_sum(plan);
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::degenerate("empty or invalid wavelength set"));
    }
    Ok(sigma * sigma / (4.0 * PI * PI * s))
}

/// `σ = 1 / sqrt(2·10^(SNR/10))`.
pub fn snr_to_sigma(snr_db: f64) -> f64 {
    1.0 / (2.0 * 10f64.powf(snr_db / 10.0)).sqrt()
}

/// Inverse of [`snr_to_sigma`].
pub fn sigma_to_snr(sigma_rad: f64) -> f64 {
    10.0 * (1.0 / (2.0 * sigma_rad * sigma_rad)).log10()
}
