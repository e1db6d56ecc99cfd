//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. List values are
//! comma-separated; numeric lists also accept inclusive ranges `a..b`
//! (unit step) and `a..b:step`, e.g. `snr_db_list = 0..10:2, 15, 20`.

use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

pub const KEYS: &[&str] = &[
    "f_high_hz",
    "f_low_hz",
    "n_freq",
    "range_k_m",
    "c_m_s",
    "seed",
    "trials",
    "snr_db_list",
    "k_list_m",
    "n_list",
    "methods",
    "truth_policy",
    "truth_m",
    "p_threshold",
];

/// Every configurable value; `None` when neither file nor flag set it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub f_high_hz: Option<f64>,
    pub f_low_hz: Option<f64>,
    pub n_freq: Option<usize>,
    pub range_k_m: Option<f64>,
    pub c_m_s: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub snr_db_list: Option<Vec<f64>>,
    pub k_list_m: Option<Vec<f64>>,
    pub n_list: Option<Vec<usize>>,
    pub methods: Option<Vec<String>>,
    pub truth_policy: Option<String>,
    pub truth_m: Option<f64>,
    pub p_threshold: Option<f64>,
}

impl Settings {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected `key = value`", lineno + 1)))?;
            s.set(key.trim(), value.trim())
                .map_err(|e| CliError::usage(format!("config line {}: {e}", lineno + 1)))?;
        }
        Ok(s)
    }

    fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "f_high_hz" => self.f_high_hz = Some(scalar(key, value)?),
            "f_low_hz" => self.f_low_hz = Some(scalar(key, value)?),
            "n_freq" => self.n_freq = Some(scalar(key, value)?),
            "range_k_m" => self.range_k_m = Some(scalar(key, value)?),
            "c_m_s" => self.c_m_s = Some(scalar(key, value)?),
            "seed" => self.seed = Some(scalar(key, value)?),
            "trials" => self.trials = Some(scalar(key, value)?),
            "snr_db_list" => self.snr_db_list = Some(float_list(key, value)?),
            "k_list_m" => self.k_list_m = Some(float_list(key, value)?),
            "n_list" => self.n_list = Some(int_list(key, value)?),
            "methods" => self.methods = Some(word_list(value)),
            "truth_policy" => self.truth_policy = Some(value.to_string()),
            "truth_m" => self.truth_m = Some(scalar(key, value)?),
            "p_threshold" => self.p_threshold = Some(scalar(key, value)?),
            _ => {
                return Err(CliError::usage(format!(
                    "unknown key `{key}` (known keys: {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Values set in `over` replace those in `self`.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            f_high_hz: over.f_high_hz.or(self.f_high_hz),
            f_low_hz: over.f_low_hz.or(self.f_low_hz),
            n_freq: over.n_freq.or(self.n_freq),
            range_k_m: over.range_k_m.or(self.range_k_m),
            c_m_s: over.c_m_s.or(self.c_m_s),
            seed: over.seed.or(self.seed),
            trials: over.trials.or(self.trials),
            snr_db_list: over.snr_db_list.or(self.snr_db_list),
            k_list_m: over.k_list_m.or(self.k_list_m),
            n_list: over.n_list.or(self.n_list),
            methods: over.methods.or(self.methods),
            truth_policy: over.truth_policy.or(self.truth_policy),
            truth_m: over.truth_m.or(self.truth_m),
            p_threshold: over.p_threshold.or(self.p_threshold),
        }
    }
}

/// The value of a required key, or an error naming it.
pub fn required<T: Clone>(value: &Option<T>, key: &str) -> CliResult<T> {
    value
        .clone()
        .ok_or_else(|| CliError::usage(format!("missing required key `{key}`")))
}

fn scalar<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::usage(format!("`{key}`: cannot parse `{value}`")))
}

fn word_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(String::from)
        .collect()
}

/// Parses a numeric list with optional `a..b` and `a..b:step` items.
pub fn float_list(key: &str, value: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|w| !w.is_empty()) {
        match item.split_once("..") {
            None => out.push(scalar(key, item)?),
            Some((a, rest)) => {
                let (b, step) = match rest.split_once(':') {
                    Some((b, s)) => (b, scalar::<f64>(key, s)?),
                    None => (rest, 1.0),
                };
                let (a, b): (f64, f64) = (scalar(key, a)?, scalar(key, b)?);
                if step.is_nan() || step <= 0.0 || b < a {
                    return Err(CliError::usage(format!("`{key}`: bad range `{item}`")));
                }
                let count = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| a + i as f64 * step));
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::usage(format!("`{key}`: empty list")));
    }
    Ok(out)
}

pub fn int_list(key: &str, value: &str) -> CliResult<Vec<usize>> {
    float_list(key, value)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(CliError::usage(format!("`{key}`: {x} is not a non-negative integer")))
            }
        })
        .collect()
}
