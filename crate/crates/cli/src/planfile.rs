//! Plan files: the `design` output, readable back as a plan.
//!
//! ```text
//! # pattern=concerto,r=1.0822e0,B_hz=1e8,K_m=1.44e2,UMR_m=1.44e2,c_m_s=3e8
//! index,f_hz,lambda_m
//! 0,2.5e9,1.2e-1
//! ...
//! ```
//!
//! Numbers use the shortest exponent form that round-trips, so reading a
//! written plan reproduces it exactly.

use std::fmt::Write as _;
use std::path::Path;

use unwrap_kit::{validate_plan, FrequencyPlan, PatternKind};

use crate::error::{CliError, CliResult};
use crate::fmt::num;

const COLUMNS: &str = "index,f_hz,lambda_m";

pub fn render(plan: &FrequencyPlan) -> String {
    let mut out = String::new();
    let ratio = plan.ratio().map(num).unwrap_or_default();
    writeln!(
        out,
        "# pattern={},r={ratio},B_hz={},K_m={},UMR_m={},c_m_s={}",
        plan.pattern_kind(),
        num(plan.bandwidth_hz()),
        num(plan.range_budget_m()),
        num(plan.umr_m()),
        num(plan.c_m_s())
    )
    .unwrap();
    writeln!(out, "{COLUMNS}").unwrap();
    for (i, (f, lam)) in plan.freqs_hz().iter().zip(plan.wavelengths_m()).enumerate() {
        writeln!(out, "{i},{},{}", num(*f), num(*lam)).unwrap();
    }
    out
}

pub fn load(path: &Path) -> CliResult<FrequencyPlan> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read plan {}: {e}", path.display())))?;
    parse(&text)
}

fn bad(msg: impl std::fmt::Display) -> CliError {
    CliError::Plan(format!("plan file: {msg}"))
}

pub fn parse(text: &str) -> CliResult<FrequencyPlan> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .ok_or_else(|| bad("missing `# pattern=...` header line"))?;
    let mut kind = None;
    let mut ratio = None;
    let mut k = None;
    let mut c = None;
    for field in header.split(',') {
        let (key, value) = field
            .trim()
            .split_once('=')
            .ok_or_else(|| bad(format!("bad header field `{field}`")))?;
        let number = || value.parse::<f64>().map_err(|_| bad(format!("bad value for {key}: `{value}`")));
        match key {
            "pattern" => kind = Some(value.parse::<PatternKind>().map_err(|_| bad(format!("unknown pattern `{value}`")))?),
            "r" if !value.is_empty() => ratio = Some(number()?),
            "K_m" => k = Some(number()?),
            "c_m_s" => c = Some(number()?),
            _ => {}
        }
    }
    let kind = kind.ok_or_else(|| bad("header lacks pattern"))?;
    let k = k.ok_or_else(|| bad("header lacks K_m"))?;
    let c = c.ok_or_else(|| bad("header lacks c_m_s"))?;
    if lines.next() != Some(COLUMNS) {
        return Err(bad(format!("expected column line `{COLUMNS}`")));
    }

    let mut freqs = Vec::new();
    let mut lambdas = Vec::new();
    for (row, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let [index, f, lam] = cells[..] else {
            return Err(bad(format!("row {row}: expected 3 fields")));
        };
        if index.parse::<usize>().ok() != Some(row) {
            return Err(bad(format!("row {row}: index `{index}` out of order")));
        }
        freqs.push(f.parse::<f64>().map_err(|_| bad(format!("row {row}: bad f_hz `{f}`")))?);
        lambdas.push(lam.parse::<f64>().map_err(|_| bad(format!("row {row}: bad lambda_m `{lam}`")))?);
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(bad(format!("c_m_s {c} must be positive")));
    }
    let plan = FrequencyPlan::from_parts(freqs, c, ratio, k, kind);
    for (i, (ours, theirs)) in plan.wavelengths_m().iter().zip(&lambdas).enumerate() {
        if (ours - theirs).abs() > 1e-12 * ours.abs() {
            return Err(bad(format!("row {i}: lambda_m {theirs} != c/f_hz = {ours}")));
        }
    }
    let violations = validate_plan(&plan);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(bad(list.join("; ")));
    }
    Ok(plan)
}
