//! Wrapped-phase arithmetic.
//!
//! Every wrapped phase in the crate lives in `(-π, π]`. The lower boundary
//! `-π` is excluded and maps to `+π`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Reduces `x` modulo 2π into `(-π, π]`.
///
/// Values already inside the range are returned unchanged, which makes the
/// operation exactly idempotent.
pub fn wrap_phase(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("cannot wrap non-finite phase {x}")));
    }
    Ok(wrap_unchecked(x))
}

/// Wrapped difference `[a - b]` in `(-π, π]`.
pub fn wrap_diff(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!("cannot wrap non-finite difference {a} - {b}")));
    }
    Ok(wrap_unchecked(a - b))
}

/// Wrap for values the caller already knows to be finite.
///
/// Subtracts the nearest multiple of 2π with a fused multiply-add, so
/// `x - k·TAU` is rounded once, as accurate as `x % TAU` but at a cost that
/// does not grow with `|x|`.
#[inline]
pub(crate) fn wrap_unchecked(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let y = (-(x / TAU).round()).mul_add(TAU, x);
    if y > PI {
        y - TAU
    } else if y <= -PI {
        y + TAU
    } else {
        y
    }
}

/// Round half away from zero. Every integer decision in the estimators goes
/// through here.
#[inline]
pub fn round_half_away(x: f64) -> f64 {
    x.round()
}

/// Phase in cycles, `φ / 2π`.
#[inline]
pub(crate) fn cycles(phase: f64) -> f64 {
    phase / TAU
}
