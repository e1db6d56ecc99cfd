//! Closed-form multi-frequency phase unwrapping.
//!
//! Given wrapped phases of one range `L` measured at `N` wavelengths, the
//! [`concerto`](estimators::Concerto) estimator recovers `L` in three closed-form
//! stages: a beat-wavelength chain for a coarse range, a weighted residual
//! correction, and a least-squares fit over all wavelengths. The crate also
//! designs the matching frequency pattern, provides the beat-wavelength and
//! excess-fractions baselines, the error theory (including the Cramér-Rao
//! bound) and a reproducible Monte-Carlo harness.
//!
//! Units are metres, hertz, radians and seconds throughout. Wrapped phases lie
//! in `(-π, π]`.
//!
//! ```
//! use unwrap_kit::{design_concerto_plan, true_phases, concerto_estimate};
//!
//! let plan = design_concerto_plan(2.5e9, 2.4e9, 51, 144.0, 3e8).unwrap();
//! let obs = true_phases(37.25, &plan).unwrap();
//! let trace = concerto_estimate(&obs).unwrap();
//! assert!((trace.l_final_m - 37.25).abs() < 1e-9);
//! ```

// `!(x > y)` is used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod design;
pub mod error;
pub mod estimators;
mod noise;
mod observation;
pub mod phase;
mod plan;
pub mod sim;
pub mod theory;

pub use design::{design_bw_plan, design_concerto_plan, umr, validate_plan, Violation};
pub use error::{Error, Result};
pub use estimators::{
    bw_estimate, bw_fold_chain, coarse_estimate, concerto_estimate, ef_estimate, EstimateTrace,
    Estimator, EstimatorRegistry, PreparedEstimator,
};
pub use noise::NoiseSpec;
pub use observation::{beat_set, true_phases, BeatSet, PhaseObservation};
pub use phase::{wrap_diff, wrap_phase};
pub use plan::{FrequencyPlan, PatternKind, SPEED_OF_LIGHT};
