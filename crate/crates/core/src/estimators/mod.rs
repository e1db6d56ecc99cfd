//! Range estimators over a [`PhaseObservation`].
//!
//! Every estimator returns an [`EstimateTrace`] holding its intermediate
//! quantities, so the Monte-Carlo harness can score individual stages.

mod chain;
mod concerto;
mod ef;
pub mod oracle;
mod registry;

pub use chain::{bw_estimate, bw_fold_chain, coarse_estimate, BwEstimator};
pub use concerto::{
    build_w, compensate_phases, concerto_estimate, fold_integers, ls_refine, residual_estimate,
    Concerto, ConcertoEstimator, LsSystem, ResidualSystem, WMatrix,
};
pub use ef::{ef_estimate, EfEstimator};
pub use registry::EstimatorRegistry;

use crate::error::{Error, Result};
use crate::observation::PhaseObservation;
use crate::plan::FrequencyPlan;

/// Intermediate and final quantities of one estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateTrace {
    pub method: &'static str,
    /// Beat folding integers `M_1 … M_{N-1}` (`M_1 = 0`). Empty for
    /// methods without a beat chain.
    pub m_chain: Vec<i64>,
    /// Coarse range `L_c`.
    pub l_coarse_m: f64,
    /// Residual correction `L_r*`.
    pub l_residual_m: f64,
    /// `L_m = L_c + L_r*`.
    pub l_mid_m: f64,
    /// Folding integers `m̂_0 … m̂_{N-1}` of the final branch.
    pub fold_ints: Vec<i64>,
    /// Final range `L*`.
    pub l_final_m: f64,
}

impl EstimateTrace {
    /// `ΔL = L* - L` when the observation carries its ground truth.
    pub fn error_m(&self, obs: &PhaseObservation<'_>) -> Option<f64> {
        obs.truth_m().map(|l| self.l_final_m - l)
    }
}

/// An estimator that can be looked up by name.
pub trait Estimator: Send + Sync {
    fn name(&self) -> &'static str;

    /// Binds the estimator to a plan, precomputing everything that depends
    /// on the plan alone.
    fn prepare<'p>(&self, plan: &'p FrequencyPlan) -> Result<Box<dyn PreparedEstimator + 'p>>;

    /// One-shot estimate; prefer [`Estimator::prepare`] in loops.
    fn estimate(&self, obs: &PhaseObservation<'_>) -> Result<EstimateTrace> {
        self.prepare(obs.plan())?.estimate(obs)
    }
}

/// An estimator bound to one plan.
pub trait PreparedEstimator: Send + Sync {
    fn estimate(&self, obs: &PhaseObservation<'_>) -> Result<EstimateTrace>;
}

pub(crate) fn ensure_same_plan(bound: &FrequencyPlan, obs: &PhaseObservation<'_>) -> Result<()> {
    if std::ptr::eq(bound, obs.plan()) || bound == obs.plan() {
        Ok(())
    } else {
        Err(Error::invalid("observation belongs to a different plan"))
    }
}

pub(crate) fn to_int(x: f64) -> i64 {
    x as i64
}
