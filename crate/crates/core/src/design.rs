//! Frequency-pattern design and plan validation.

use std::fmt;

use crate::error::{Error, Result};
use crate::plan::{FrequencyPlan, PatternKind};

/// Relative tolerance on the equal-ratio condition of designed patterns.
pub const RATIO_TOLERANCE: f64 = 1e-9;
/// Relative tolerance on `λ_i · f_i = c`.
pub const WAVELENGTH_TOLERANCE: f64 = 1e-12;
/// Relative slack allowed when checking `UMR >= K`.
pub const UMR_TOLERANCE: f64 = 1e-9;

/// A broken [`FrequencyPlan`] invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    TooFewFrequencies { n: usize, min: usize },
    NonPositiveFrequency { index: usize },
    NonDecreasingFrequency { index: usize },
    WavelengthMismatch { index: usize },
    UmrBelowBudget { umr_m: f64, budget_m: f64 },
    MissingRatio,
    RatioMismatch { index: usize, expected: f64, actual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewFrequencies { n, min } => {
                write!(f, "too-few-frequencies: {n} < {min}")
            }
            Violation::NonPositiveFrequency { index } => {
                write!(f, "non-positive-frequency at index {index}")
            }
            Violation::NonDecreasingFrequency { index } => {
                write!(f, "non-decreasing-frequency at index {index}")
            }
            Violation::WavelengthMismatch { index } => {
                write!(f, "wavelength-mismatch at index {index}")
            }
            Violation::UmrBelowBudget { umr_m, budget_m } => {
                write!(f, "umr-below-budget: UMR {umr_m} m < K {budget_m} m")
            }
            Violation::MissingRatio => write!(f, "missing-ratio on a designed plan"),
            Violation::RatioMismatch {
                index,
                expected,
                actual,
            } => write!(f, "ratio-mismatch at index {index}: {actual} != {expected}"),
        }
    }
}

fn check_common(f_high: f64, f_low: f64, n: usize, min_n: usize, c: f64) -> Result<()> {
    let all_finite = [f_high, f_low, c].iter().all(|v| v.is_finite());
    if !all_finite || !(f_high > f_low && f_low > 0.0) {
        return Err(Error::invalid(format!(
            "need f_high > f_low > 0, got f_high = {f_high}, f_low = {f_low}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::invalid(format!("propagation speed {c} must be positive")));
    }
    if n < min_n {
        return Err(Error::invalid(format!("need at least {min_n} frequencies, got {n}")));
    }
    Ok(())
}

/// Designs the equal-ratio pattern with `UMR = K`.
///
/// The highest and lowest frequencies are fixed. With `B = f_high - f_low`
/// the common ratio is `r = (B·K/c)^(1/(n-2))`, and interior frequencies are
/// `f_i = f_0 - B·r^-(n-1-i)`.
pub fn design_concerto_plan(f_high: f64, f_low: f64, n: usize, k: f64, c: f64) -> Result<FrequencyPlan> {
    check_common(f_high, f_low, n, 3, c)?;
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::invalid(format!("range budget {k} must be positive")));
    }
    let bandwidth = f_high - f_low;
    let spread = bandwidth * k / c;
    if !(spread > 1.0) {
        return Err(Error::InfeasibleDesign(format!(
            "B*K/c = {spread} <= 1; the ratio would not exceed one"
        )));
    }
    let steps = (n - 2) as f64;
    let ratio = spread.powf(1.0 / steps);
    let mut freqs = Vec::with_capacity(n);
    freqs.push(f_high);
    // r^-(n-1-i) = spread^-((n-1-i)/(n-2)); exponent -1 at i = 1 keeps UMR = K exact.
    for i in 1..n - 1 {
        let e = (n - 1 - i) as f64 / steps;
        freqs.push(f_high - bandwidth * spread.powf(-e));
    }
    freqs.push(f_low);
    designed(FrequencyPlan::from_parts(freqs, c, Some(ratio), k, PatternKind::Concerto))
}

/// Designs the classical beat-wavelength pattern with common ratio `ρ = f_0/B`:
/// `f_i = f_0 - B·ρ^-(n-1-i)`. The range budget is set to the resulting UMR.
pub fn design_bw_plan(f_high: f64, bandwidth: f64, n: usize, c: f64) -> Result<FrequencyPlan> {
    if !(bandwidth.is_finite() && bandwidth > 0.0 && f_high > bandwidth) {
        return Err(Error::invalid(format!(
            "need f_high > bandwidth > 0, got f_high = {f_high}, B = {bandwidth}"
        )));
    }
    check_common(f_high, f_high - bandwidth, n, 3, c)?;
    let rho = f_high / bandwidth;
    let mut freqs = Vec::with_capacity(n);
    freqs.push(f_high);
    for i in 1..n {
        let e = (n - 1 - i) as i32;
        freqs.push(f_high - bandwidth * rho.powi(-e));
    }
    let umr = c / (freqs[0] - freqs[1]);
    designed(FrequencyPlan::from_parts(freqs, c, Some(rho), umr, PatternKind::Bw))
}

/// A designed pattern whose rounded frequencies break its own invariants
/// (adjacent gaps too small for f64) is infeasible rather than malformed.
fn designed(plan: FrequencyPlan) -> Result<FrequencyPlan> {
    plan.checked().map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::InfeasibleDesign(format!("pattern not representable: {msg}")),
        e => e,
    })
}

/// Checks every plan invariant and lists the ones that fail.
pub fn validate_plan(plan: &FrequencyPlan) -> Vec<Violation> {
    let mut out = Vec::new();
    let freqs = plan.freqs_hz();
    let lams = plan.wavelengths_m();
    let c = plan.c_m_s();
    let designed = matches!(plan.pattern_kind(), PatternKind::Concerto | PatternKind::Bw);
    let min_n = if designed { 3 } else { 1 };
    if freqs.len() < min_n {
        out.push(Violation::TooFewFrequencies { n: freqs.len(), min: min_n });
    }
    for (i, &f) in freqs.iter().enumerate() {
        if !(f.is_finite() && f > 0.0) {
            out.push(Violation::NonPositiveFrequency { index: i });
        }
        if i > 0 && !(f < freqs[i - 1]) {
            out.push(Violation::NonDecreasingFrequency { index: i });
        }
        let product = lams.get(i).copied().unwrap_or(f64::NAN) * f;
        if !((product - c).abs() <= WAVELENGTH_TOLERANCE * c) {
            out.push(Violation::WavelengthMismatch { index: i });
        }
    }
    if !out.is_empty() || !designed {
        return out;
    }

    let umr = plan.umr_m();
    let budget = plan.range_budget_m();
    if !(umr >= budget * (1.0 - UMR_TOLERANCE)) {
        out.push(Violation::UmrBelowBudget { umr_m: umr, budget_m: budget });
    }
    let expected = match (plan.pattern_kind(), plan.ratio()) {
        (_, None) => {
            out.push(Violation::MissingRatio);
            return out;
        }
        (PatternKind::Bw, Some(_)) => freqs[0] / plan.bandwidth_hz(),
        (_, Some(r)) => r,
    };
    let f0 = freqs[0];
    for i in 1..freqs.len() - 1 {
        let actual = (f0 - freqs[i + 1]) / (f0 - freqs[i]);
        if !((actual - expected).abs() <= RATIO_TOLERANCE * expected) {
            out.push(Violation::RatioMismatch {
                index: i + 1,
                expected,
                actual,
            });
        }
    }
    out
}

/// Unambiguous measurement range, `c / (f_0 - f_1)`.
pub fn umr(plan: &FrequencyPlan) -> f64 {
    plan.umr_m()
}
