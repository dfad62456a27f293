//! `specwell` — command-line front end for the spectral inverse-problem
//! library.
//!
//! Three subcommands mirror the library's layers:
//!
//! * `solve`  — forward eigenproblem for one potential: spectra JSON,
//!   wavefunction CSV, and a run summary.
//! * `invert` — spectra JSON in, reconstructed polynomial well out, with
//!   the full SVD diagnostics and the re-solved spectra.
//! * `scan`   — the seeded batch pipelines (ω scan, convergence study,
//!   half-power scan, large-β search) emitting CSV + summary JSON.
//!
//! ## Exit codes — stable contract
//!
//! | code | meaning                                                    |
//! |------|------------------------------------------------------------|
//! | 0    | success                                                    |
//! | 1    | input or config error (bad flag, malformed file, bad key)  |
//! | 2    | forward solver failure (no confinement, grid too small)    |
//! | 3    | inversion produced no usable well (breakdown is reported)  |
//!
//! ## Output policy
//!
//! Every file is written atomically (temp + rename): a crashed or failed
//! run leaves no partial artifacts. JSON carries floats at 17 significant
//! digits (round-trip exact); human tables print 9.
//!
//! Thread count: `--threads` wins, then `SPECWELL_THREADS`, then all
//! available cores. Same seed + same thread count ⇒ byte-identical output
//! (the pipelines are deterministic by construction, so in practice the
//! thread count does not matter either).

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

mod config;
mod invert;
mod scan;
mod solve;

/// A classified failure: the message for stderr plus the contract exit
/// code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    /// Exit 1: the user gave us something unusable.
    #[must_use]
    pub fn config(message: String) -> Self {
        Self { code: 1, message }
    }

    /// Exit 2: the forward solver could not hold the requested states.
    #[must_use]
    pub fn forward(message: String) -> Self {
        Self { code: 2, message }
    }

    /// Exit 3: the inversion ran but produced no usable well.
    #[must_use]
    pub fn breakdown(message: String) -> Self {
        Self { code: 3, message }
    }

    /// Classify a library error from a *forward-solving* context: grid and
    /// confinement failures are exit 2, everything else is bad input.
    #[must_use]
    pub fn from_solver_error(e: &specwell::Error) -> Self {
        use specwell::Error as E;
        match e {
            E::InsufficientGrid(_) | E::NoConfinement(_) | E::UnresolvedStates { .. } => {
                Self::forward(e.to_string())
            }
            _ => Self::config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::config(format!("i/o failure: {e}"))
    }
}

/// Format one float for a human table: 9 significant digits, scientific.
#[must_use]
pub fn sci9(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        v.to_string()
    }
}

#[derive(Parser)]
#[command(
    name = "specwell",
    version,
    about = "Spectra → polynomial wells and back: forward solver, SVD \
             least-norm inversion, and seeded scan pipelines",
    after_help = "Exit codes: 0 success, 1 input/config error, 2 forward-\
                  solver failure, 3 inversion produced no usable well."
)]
struct Cli {
    /// Worker threads (overrides SPECWELL_THREADS; default: all cores).
    /// Results are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one potential's lowest states; write spectra JSON,
    /// wavefunction CSV, and a summary
    Solve(solve::SolveArgs),
    /// Reconstruct a polynomial well from spectra JSON; write coefficients,
    /// diagnostics, and the re-solved spectra
    Invert(invert::InvertArgs),
    /// Run a seeded batch pipeline; write CSV and summary JSON
    Scan(scan::ScanArgs),
}

/// Install the global rayon pool when a count was requested explicitly.
fn init_threads(flag: Option<usize>) -> Result<(), Failure> {
    let requested = match flag {
        Some(n) => Some(n),
        None => match std::env::var("SPECWELL_THREADS") {
            Ok(v) => Some(v.parse::<usize>().map_err(|_| {
                Failure::config(format!(
                    "SPECWELL_THREADS: expected a thread count, got {v:?}"
                ))
            })?),
            Err(_) => None,
        },
    };
    let Some(n) = requested else {
        return Ok(()); // rayon's default pool = available parallelism
    };
    if n == 0 {
        return Err(Failure::config("thread count must be ≥ 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::config(format!("cannot build thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    let run = init_threads(cli.threads).and_then(|()| match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Invert(args) => invert::run(&args),
        Command::Scan(args) => scan::run(&args),
    });

    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
