use crate::design::{validate_plan, Violation};
use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// How a plan's frequencies were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    /// Geometric beat-wavelength ratios with `UMR = K` (see [`crate::design_concerto_plan`]).
    Concerto,
    /// Classical beat-wavelength chain with common ratio `f_0 / B`.
    Bw,
    /// Caller-supplied frequencies.
    Explicit,
}

impl PatternKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PatternKind::Concerto => "concerto",
            PatternKind::Bw => "bw",
            PatternKind::Explicit => "explicit",
        }
    }
}

impl std::str::FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "concerto" => Ok(PatternKind::Concerto),
            "bw" => Ok(PatternKind::Bw),
            "explicit" => Ok(PatternKind::Explicit),
            other => Err(Error::invalid(format!("unknown pattern kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for PatternKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The measurement frequencies of a multi-frequency ranging system.
///
/// Frequencies are ordered `f_0 > f_1 > … > f_{N-1}`, so wavelengths grow with
/// the index. A plan is immutable once built. [`FrequencyPlan::from_parts`]
/// does not validate, which lets [`validate_plan`] inspect broken plans;
/// every other constructor does.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyPlan {
    freqs_hz: Vec<f64>,
    wavelengths_m: Vec<f64>,
    c_m_s: f64,
    ratio: Option<f64>,
    range_budget_m: f64,
    kind: PatternKind,
}

impl FrequencyPlan {
    /// Assembles a plan without checking any invariant.
    pub fn from_parts(
        freqs_hz: Vec<f64>,
        c_m_s: f64,
        ratio: Option<f64>,
        range_budget_m: f64,
        kind: PatternKind,
    ) -> Self {
        let wavelengths_m = freqs_hz.iter().map(|f| c_m_s / f).collect();
        FrequencyPlan {
            freqs_hz,
            wavelengths_m,
            c_m_s,
            ratio,
            range_budget_m,
            kind,
        }
    }

    /// A validated plan from arbitrary decreasing frequencies. The range
    /// budget is set to the plan's UMR.
    pub fn explicit(freqs_hz: Vec<f64>, c_m_s: f64) -> Result<Self> {
        if freqs_hz.is_empty() {
            return Err(Error::invalid("a plan needs at least one frequency"));
        }
        let mut plan = Self::from_parts(freqs_hz, c_m_s, None, 0.0, PatternKind::Explicit);
        plan.range_budget_m = plan.umr_m();
        plan.checked()
    }

    /// Same as [`FrequencyPlan::explicit`] but from increasing wavelengths.
    pub fn from_wavelengths(wavelengths_m: &[f64], c_m_s: f64) -> Result<Self> {
        Self::explicit(wavelengths_m.iter().map(|l| c_m_s / l).collect(), c_m_s)
    }

    pub(crate) fn checked(self) -> Result<Self> {
        if !(self.c_m_s.is_finite() && self.c_m_s > 0.0) {
            return Err(Error::invalid(format!("propagation speed {} must be positive", self.c_m_s)));
        }
        let violations = validate_plan(&self);
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidArgument(describe(&violations)))
        }
    }

    pub fn freqs_hz(&self) -> &[f64] {
        &self.freqs_hz
    }

    pub fn wavelengths_m(&self) -> &[f64] {
        &self.wavelengths_m
    }

    pub fn c_m_s(&self) -> f64 {
        self.c_m_s
    }

    /// Common ratio of the designed pattern; `None` for explicit plans.
    pub fn ratio(&self) -> Option<f64> {
        self.ratio
    }

    /// Range budget `K`: the plan is meant for `|L| < K/2`.
    pub fn range_budget_m(&self) -> f64 {
        self.range_budget_m
    }

    pub fn pattern_kind(&self) -> PatternKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.freqs_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs_hz.is_empty()
    }

    /// `B = f_0 - f_{N-1}`.
    pub fn bandwidth_hz(&self) -> f64 {
        match (self.freqs_hz.first(), self.freqs_hz.last()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0.0,
        }
    }

    /// Largest beat wavelength `c / (f_0 - f_1)`. A single-frequency plan is
    /// unambiguous over one wavelength only.
    pub fn umr_m(&self) -> f64 {
        match self.freqs_hz.as_slice() {
            [] => 0.0,
            [_] => self.wavelengths_m[0],
            [f0, f1, ..] => self.c_m_s / (f0 - f1),
        }
    }

    /// Half-width `c / 2B` of the interval the coarse stage must land in.
    pub fn coarse_half_width_m(&self) -> f64 {
        self.c_m_s / (2.0 * self.bandwidth_hz())
    }
}

pub(crate) fn describe(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
