use std::io::{self, Write};

use super::{MethodStats, SweepTable};

pub const SWEEP_CSV_HEADER: &str =
    "sweep_param,method,n_trials,mse_m2,rmse_m,mse_db,p_fail_lambda0,p_fail_stderr,p_coarse_fail,crb_m2,mean_error_m";

/// Shortest round-trip exponent form; non-finite values as `nan`/`inf`/`-inf`.
pub(crate) fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn stats_fields(s: &MethodStats) -> String {
    [
        s.n_trials.to_string(),
        num(s.mse_m2),
        num(s.rmse_m),
        num(s.mse_db()),
        num(s.p_fail_lambda0),
        num(s.p_fail_stderr),
        opt(s.p_coarse_fail),
        opt(s.crb_m2),
        num(s.mean_error_m),
    ]
    .join(",")
}

/// Writes a sweep as CSV: the header line, then one row per (param, method).
/// A point that could not run is preceded by a `#` comment naming the error
/// and has `n_trials = 0` with empty metrics.
pub fn write_sweep_csv<W: Write>(out: &mut W, table: &SweepTable) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for row in &table.rows {
        match &row.outcome {
            Ok(stats) => writeln!(out, "{},{},{}", row.param, row.method, stats_fields(stats))?,
            Err(msg) => {
                writeln!(out, "# error at sweep_param={}: {msg}", row.param)?;
                writeln!(out, "{},{},0,,,,,,,,", row.param, row.method)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SweepRow;

    #[test]
    fn number_format() {
        assert_eq!(num(0.0), "0e0");
        assert_eq!(num(3.5e-8), "3.5e-8");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        assert_eq!(num(f64::NAN), "nan");
        assert_eq!("3.5e-8".parse::<f64>().unwrap(), 3.5e-8);
    }

    #[test]
    fn error_rows_keep_the_schema() {
        let table = SweepTable {
            rows: vec![SweepRow {
                param: 1.0,
                method: "concerto".into(),
                outcome: Err("infeasible".into()),
            }],
        };
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &table).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert!(lines[1].starts_with('#'));
        assert_eq!(lines[2].split(',').count(), SWEEP_CSV_HEADER.split(',').count());
    }
}
