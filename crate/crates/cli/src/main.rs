//! `pt-jc`: spectra, concurrence traces, κ scans and the verification suite
//! for the PT-symmetric Jaynes–Cummings model.
//!
//! Exit status: 0 on success, 1 when a verification check (or I/O) fails,
//! 2 for an invalid configuration.

mod commands;
mod table;

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use table::Format;

#[derive(Debug, Parser)]
#[command(name = "pt-jc", version, about = "PT-symmetric Jaynes-Cummings toolkit", propagate_version = true)]
struct Cli {
    /// Reserved seed. Every command is deterministic, so it is currently unused.
    #[arg(long, env = "PT_JC_SEED", global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact energies E_n^± and frequencies Ω_{n+1} with their PT regime.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// Highest excitation number n listed.
        #[arg(long, default_value_t = 10)]
        levels: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Concurrence C against gt/π for one initial state.
    Concurrence {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        time: TimeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Concurrence traces for κ ∈ {0.9, 1.4, 1.7, 2} and n ∈ {0, 1, 2}, one file per κ.
    Figure1 {
        /// Initial-state angle γ.
        #[arg(long, default_value_t = FRAC_PI_4)]
        gamma: f64,
        #[command(flatten)]
        time: TimeArgs,
        /// Output directory; files are named figure1_{a,b,c,d}.<format>.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Add a generation timestamp to the metadata.
        #[arg(long)]
        timestamp: bool,
    },
    /// Regime census and late-time concurrence statistics over a κ grid (g = ν = 1).
    ScanKappa {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        time: TimeArgs,
        #[arg(long, default_value_t = 0.5)]
        kappa_min: f64,
        #[arg(long, default_value_t = 2.5)]
        kappa_max: f64,
        #[arg(long, default_value_t = 0.01)]
        kappa_step: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed forms against brute-force oracles; exits 1 if any check fails.
    Verify {
        /// Run only the static-map checks.
        #[arg(long = "static", conflicts_with = "dynamic")]
        static_only: bool,
        /// Run only the time-dependent, entanglement and spectrum checks.
        #[arg(long)]
        dynamic: bool,
        /// Report file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Add a generation timestamp to the metadata.
        #[arg(long)]
        timestamp: bool,
    },
}

/// Model parameters. `--kappa` sets ω = ν + κg and cannot be combined with
/// `--omega`; with neither, κ = 2.
#[derive(Debug, Clone, Args)]
struct ModelArgs {
    /// Coupling ratio κ = (ω − ν)/g.
    #[arg(long)]
    kappa: Option<f64>,
    /// Cavity frequency ω.
    #[arg(long)]
    omega: Option<f64>,
    /// Atomic transition frequency ν.
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    /// Coupling strength g.
    #[arg(long, default_value_t = 1.0)]
    g: f64,
}

#[derive(Debug, Clone, Args)]
struct StateArgs {
    /// Photons initially in cavity b.
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Initial-state angle γ in sinγ|↓↓⟩ + cosγ|↑↑⟩.
    #[arg(long, default_value_t = FRAC_PI_4)]
    gamma: f64,
}

#[derive(Debug, Clone, Args)]
struct TimeArgs {
    /// Window end in units of gt/π.
    #[arg(long, default_value_t = 10.0)]
    t_max_pi: f64,
    /// Number of samples on [0, t-max-pi], endpoints included.
    #[arg(long, default_value_t = 2001)]
    samples: usize,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Add a generation timestamp to the metadata.
    #[arg(long)]
    timestamp: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::ChecksFailed) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<commands::ConfigError>().is_some() => {
            eprintln!("pt-jc: invalid configuration: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("pt-jc: {e:#}");
            ExitCode::from(1)
        }
    }
}
