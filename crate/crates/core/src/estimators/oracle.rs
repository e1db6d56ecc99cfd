//! Brute-force reference for the residual stage.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::plan::FrequencyPlan;

/// Golden-section refinement depth used by [`cost_grid_oracle`].
pub const GOLDEN_ITERATIONS: usize = 40;

/// Default oracle span `2c/B` and step `c/(200B)` for a plan.
pub fn default_grid(plan: &FrequencyPlan) -> (f64, f64) {
    let cb = plan.c_m_s() / plan.bandwidth_hz();
    (2.0 * cb, cb / 200.0)
}

/// `|Σ_i exp(j(2π f_i L/c - φ̃_i))|²`.
pub fn alignment_cost(compensated: &[f64], plan: &FrequencyPlan, l: f64) -> f64 {
    let k = TAU * l / plan.c_m_s();
    let (re, im) = plan
        .freqs_hz()
        .iter()
        .zip(compensated)
        .fold((0.0, 0.0), |(re, im), (f, phi)| {
            let a = k * f - phi;
            (re + a.cos(), im + a.sin())
        });
    re * re + im * im
}

/// Maximises the phasor-alignment cost over a uniform grid on
/// `[-span/2, span/2]`, then refines around the best grid point by golden
/// section.
pub fn cost_grid_oracle(compensated: &[f64], plan: &FrequencyPlan, span: f64, step: f64) -> Result<f64> {
    if compensated.len() != plan.len() {
        return Err(Error::invalid("one compensated phase per frequency is required"));
    }
    if !(step > 0.0 && step.is_finite() && span.is_finite() && span > 0.0) {
        return Err(Error::invalid(format!("bad oracle grid: span {span}, step {step}")));
    }
    let count = (span / step).floor() as usize;
    let mut best_l = -span / 2.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=count {
        let l = -span / 2.0 + i as f64 * step;
        let v = alignment_cost(compensated, plan, l);
        if v > best {
            best = v;
            best_l = l;
        }
    }

    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best_l - step, best_l + step);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = alignment_cost(compensated, plan, x1);
    let mut f2 = alignment_cost(compensated, plan, x2);
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = alignment_cost(compensated, plan, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = alignment_cost(compensated, plan, x2);
        }
    }
    Ok(0.5 * (a + b))
}
