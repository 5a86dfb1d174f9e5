//! Command-line front end: one subcommand per reproduction recipe.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod cmd;
mod io;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twophoton::lindblad::Tolerances;

use io::CliError;

#[derive(Parser)]
#[command(
    name = "twophoton",
    version,
    about = "Two-photon detection with a Josephson photomultiplier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flux maps of the coupler energy, g21 and parity residual.
    Coupler(Common),
    /// JPM spectrum, wavefunctions, charge matrix and rate table.
    Jpm(Common),
    /// Time evolution of one detector configuration.
    Simulate(Common),
    /// Fidelity maps over one or two parameters.
    Sweep(Common),
    /// Derived energies, rate ratios and preset fidelities.
    Tables(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration; optional for `tables`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for parallel work (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Relative local-error tolerance of the integrator.
    #[arg(long)]
    tol_rel: Option<f64>,
    /// Absolute local-error tolerance of the integrator.
    #[arg(long)]
    tol_abs: Option<f64>,
}

pub struct Context {
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub tolerances: Option<Tolerances>,
}

impl Context {
    /// Tolerances from the flags layered over `base`.
    pub fn tolerances(&self, base: Tolerances) -> Tolerances {
        self.tolerances.unwrap_or(base)
    }
}

fn setup(common: Common) -> Result<Context, CliError> {
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(CliError::config("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(format!("cannot start {n} threads: {e}")))?;
    }
    let tolerances = match (common.tol_rel, common.tol_abs) {
        (None, None) => None,
        (rel, abs) => {
            let d = Tolerances::default();
            let t = Tolerances {
                rel: rel.unwrap_or(d.rel),
                abs: abs.unwrap_or(d.abs),
            };
            t.validate()?;
            Some(t)
        }
    };
    std::fs::create_dir_all(&common.out).map_err(|e| {
        CliError::config(format!(
            "cannot create output directory {}: {e}",
            common.out.display()
        ))
    })?;
    Ok(Context {
        config: common.config,
        out: common.out,
        tolerances,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Coupler(c) => setup(c).and_then(|ctx| cmd::coupler::run(&ctx)),
        Command::Jpm(c) => setup(c).and_then(|ctx| cmd::jpm::run(&ctx)),
        Command::Simulate(c) => setup(c).and_then(|ctx| cmd::simulate::run(&ctx)),
        Command::Sweep(c) => setup(c).and_then(|ctx| cmd::sweep::run(&ctx)),
        Command::Tables(c) => setup(c).and_then(|ctx| cmd::tables::run(&ctx)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
