//! `unwrap-kit` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 invalid or
//! infeasible plan or input, 3 numeric failure during a run.

mod commands;
mod config;
mod error;
mod fmt;
mod planfile;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::config::Settings;
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "unwrap-kit", version, about = "Multi-frequency phase unwrapping toolkit")]
struct Cli {
    /// `key = value` configuration file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write results here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Master seed of the per-trial random streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte-Carlo trials per point (`bench`: estimates per method).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Suppress progress messages on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

/// Frequency band and pattern parameters.
#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    /// Highest frequency f_0 in Hz.
    #[arg(long = "f-high")]
    pub f_high: Option<f64>,
    /// Lowest frequency f_{N-1} in Hz.
    #[arg(long = "f-low")]
    pub f_low: Option<f64>,
    /// Number of frequencies.
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Range budget K in metres.
    #[arg(long = "k")]
    pub k: Option<f64>,
    /// Propagation speed in m/s.
    #[arg(long = "c")]
    pub c: Option<f64>,
}

/// A plan, either read from a `design` output file or designed from flags.
#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub design: DesignArgs,
    /// Plan file written by `design`.
    #[arg(long, value_name = "FILE")]
    pub plan: Option<PathBuf>,
    /// Pattern to design: `concerto` or `bw`.
    #[arg(long, default_value = "concerto")]
    pub pattern: String,
}

#[derive(Debug, Clone, Args)]
pub struct TruthArgs {
    /// `uniform` (central half of the budget), `uniform:<fraction>`, `full` or `fixed`.
    #[arg(long = "truth-policy")]
    pub truth_policy: Option<String>,
    /// Range used by the `fixed` policy, in metres.
    #[arg(long = "truth-m", allow_hyphen_values = true)]
    pub truth_m: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Design a frequency plan and print it as CSV.
    Design(PlanArgs),
    /// Run one estimate and print its stage-by-stage trace.
    Estimate {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value = "concerto")]
        method: String,
        /// Wrapped phases in radians, comma-separated.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
        phases: Option<String>,
        /// Synthesize phases for this true range in metres.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<f64>,
        /// SNR for synthesized phases; noiseless when omitted.
        #[arg(long = "snr-db", allow_hyphen_values = true)]
        snr_db: Option<String>,
    },
    /// Cramér-Rao bound of a plan at one or more SNRs.
    Crb {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long = "snr-db", allow_hyphen_values = true)]
        snr_db: Option<String>,
    },
    /// Monte-Carlo SNR sweep over several methods.
    Simulate {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long = "snr-db", allow_hyphen_values = true)]
        snr_db: Option<String>,
        #[arg(long)]
        methods: Option<String>,
        #[command(flatten)]
        truth: TruthArgs,
    },
    /// Coarse-stage failure probability versus range budget.
    SweepRange {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long = "n-list")]
        n_list: Option<String>,
        #[arg(long = "k-list")]
        k_list: Option<String>,
        #[arg(long = "snr-db", allow_hyphen_values = true)]
        snr_db: Option<String>,
        #[command(flatten)]
        truth: TruthArgs,
    },
    /// SNR threshold of concerto versus the number of frequencies.
    Threshold {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long = "n-list")]
        n_list: Option<String>,
        /// Ascending SNR grid in dB.
        #[arg(long = "snr-db", allow_hyphen_values = true)]
        snr_db: Option<String>,
        #[arg(long = "p-threshold")]
        p_threshold: Option<f64>,
        #[command(flatten)]
        truth: TruthArgs,
    },
    /// Per-estimate latency of each method on one thread.
    Bench {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long)]
        methods: Option<String>,
        #[arg(long = "snr-db", allow_hyphen_values = true)]
        snr_db: Option<String>,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("UNWRAP_KIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("UNWRAP_KIT_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let file = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let globals = Settings {
        seed: cli.seed,
        trials: cli.trials,
        ..Settings::default()
    };
    let ctx = commands::Context {
        settings: file.overlay(globals),
        quiet: cli.quiet,
    };
    let output = match cli.command {
        Command::Design(plan) => commands::design(&ctx, &plan)?,
        Command::Estimate {
            plan,
            method,
            phases,
            range,
            snr_db,
        } => commands::estimate(&ctx, &plan, &method, phases.as_deref(), range, snr_db.as_deref())?,
        Command::Crb { plan, snr_db } => commands::crb(&ctx, &plan, snr_db.as_deref())?,
        Command::Simulate {
            plan,
            snr_db,
            methods,
            truth,
        } => commands::simulate(&ctx, &plan, snr_db.as_deref(), methods.as_deref(), &truth)?,
        Command::SweepRange {
            design,
            n_list,
            k_list,
            snr_db,
            truth,
        } => commands::sweep_range(&ctx, &design, n_list.as_deref(), k_list.as_deref(), snr_db.as_deref(), &truth)?,
        Command::Threshold {
            design,
            n_list,
            snr_db,
            p_threshold,
            truth,
        } => commands::threshold(&ctx, &design, n_list.as_deref(), snr_db.as_deref(), p_threshold, &truth)?,
        Command::Bench {
            plan,
            methods,
            snr_db,
        } => commands::bench(&ctx, &plan, methods.as_deref(), snr_db.as_deref())?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, output.as_bytes())?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(output.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
