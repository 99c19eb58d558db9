//! `ising-fidelity`: parameter sweeps over the transverse-field Ising chain
//! written as CSV or JSON.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ising_fidelity::quench::{DEFAULT_G_END, DEFAULT_G_START, DEFAULT_TOL};
use ising_fidelity::scaling::DEFAULT_ONSET_THRESHOLD;

use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "ising-fidelity",
    version,
    about = "Fidelity and quench sweeps for the transverse-field Ising chain"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format; fit commands default to JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "ISING_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fidelity susceptibility and its two sector sums over a field range.
    Chi {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        g_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        g_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Finite-size fidelity F(g, δ) over a field range.
    Fidelity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, allow_hyphen_values = true)]
        g_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        g_max: f64,
        #[arg(long)]
        steps: usize,
        /// Warn when N|δ| is below this value.
        #[arg(long, default_value_t = DEFAULT_ONSET_THRESHOLD)]
        threshold: f64,
    },
    /// Thermodynamic scaling function A(c).
    Scaling {
        #[arg(long, allow_hyphen_values = true)]
        c_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        c_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Parity gap between the lowest levels of the two sectors.
    Gap {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        g_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        g_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Instantaneous ground-state probability along a linear ramp.
    Quench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau_q: f64,
        #[command(flatten)]
        ramp: Ramp,
    },
    /// Fit ln p_GS against N at fixed τ_Q.
    FitSize {
        #[arg(long, default_value_t = 50.0)]
        tau_q: f64,
        #[arg(long, default_value_t = 100)]
        n_min: usize,
        #[arg(long, default_value_t = 1000)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        n_step: usize,
        #[command(flatten)]
        ramp: Ramp,
    },
    /// Fit ln p_GS against 1/√τ_Q at fixed N.
    FitTau {
        #[arg(long, default_value_t = 150)]
        n: usize,
        #[arg(long, default_value_t = 50.0)]
        tau_min: f64,
        #[arg(long, default_value_t = 150.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 10.0)]
        tau_step: f64,
        #[command(flatten)]
        ramp: Ramp,
    },
    /// Compare free-fermion results with dense diagonalisation on a small chain.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        g: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Also compare a quench with this ramp time (even N ≤ 10).
        #[arg(long)]
        tau_q: Option<f64>,
        #[command(flatten)]
        ramp: Ramp,
        #[arg(long, default_value_t = 1e-12)]
        oracle_tol: f64,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Ramp {
    #[arg(long, default_value_t = DEFAULT_G_START, allow_hyphen_values = true)]
    pub g_start: f64,
    #[arg(long, default_value_t = DEFAULT_G_END, allow_hyphen_values = true)]
    pub g_end: f64,
    /// ODE tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.common.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.threads)
            .build_global()?;
    }
    let out = cli.common.output.as_deref();
    let format = cli.common.format;
    let rows = format.unwrap_or(Format::Csv);
    match cli.command {
        Command::Chi {
            n,
            g_min,
            g_max,
            steps,
        } => commands::chi(n, g_min, g_max, steps, rows, out),
        Command::Fidelity {
            n,
            delta,
            g_min,
            g_max,
            steps,
            threshold,
        } => commands::fidelity(n, delta, g_min, g_max, steps, threshold, rows, out),
        Command::Scaling {
            c_min,
            c_max,
            steps,
        } => commands::scaling(c_min, c_max, steps, rows, out),
        Command::Gap {
            n,
            g_min,
            g_max,
            steps,
            tol,
        } => commands::gap(n, g_min, g_max, steps, tol, rows, out),
        Command::Quench { n, tau_q, ramp } => commands::quench(n, tau_q, ramp, rows, out),
        Command::FitSize {
            tau_q,
            n_min,
            n_max,
            n_step,
            ramp,
        } => commands::fit_size(tau_q, n_min, n_max, n_step, ramp, format, out),
        Command::FitTau {
            n,
            tau_min,
            tau_max,
            tau_step,
            ramp,
        } => commands::fit_tau(n, tau_min, tau_max, tau_step, ramp, format, out),
        Command::Oracle {
            n,
            g,
            delta,
            tau_q,
            ramp,
            oracle_tol,
        } => commands::oracle(n, g, delta, tau_q, ramp, oracle_tol, rows, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("run with --help for usage");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
