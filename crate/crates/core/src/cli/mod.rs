//! Batch front end: `aperiodic-spectra <command> --config <file>`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 generation or I/O
//! failure, 4 domain error (the probed energy lies in the spectrum).

mod commands;
pub mod config;
pub mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::ExperimentConfig;
pub use manifest::{RunManifest, MANIFEST_FILE};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_GENERATION: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "aperiodic-spectra",
    version,
    about = "Spectral diagnostics for Jacobi operators over subshifts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "APERIODIC_SPECTRA_THREADS")]
    pub threads: Option<usize>,
    /// Seed for randomised offsets; overrides `seed` from the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Orbit window and factor complexity.
    Orbit,
    /// Lyapunov curve over the grid plus uniformity spreads.
    Lyapunov,
    /// Zero-set and finite-section estimates, comparison and measure trend.
    Spectrum,
    /// The sequence n·η(n) of smallest cylinder frequencies.
    Boshernitzan,
    /// Exponential decay of the section resolvent at one energy.
    CombesThomas {
        #[arg(long, allow_hyphen_values = true)]
        energy: Option<f64>,
    },
    /// Spread of growth rates across base offsets at n, 2n, 4n.
    Uniformity,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Orbit => "orbit",
            Command::Lyapunov => "lyapunov",
            Command::Spectrum => "spectrum",
            Command::Boshernitzan => "boshernitzan",
            Command::CombesThomas { .. } => "combes-thomas",
            Command::Uniformity => "uniformity",
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    run_from(std::env::args_os())
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err((code, e)) => {
            eprintln!("error: {e}");
            code
        }
    }
}

fn execute(cli: &Cli) -> Result<(), (i32, Error)> {
    let config_err = |e: Error| (EXIT_CONFIG, e);
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| config_err(Error::Config("--config <path> is required".into())))?;
    let mut config = ExperimentConfig::load(path).map_err(config_err)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_dir = Some(out.clone());
    }
    let validated = config.validate().map_err(config_err)?;
    let out_dir = config.output_dir.clone().unwrap_or_else(|| PathBuf::from("out"));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| (EXIT_GENERATION, Error::InvalidArgument(e.to_string())))?;

    let ctx = commands::Context {
        config: &config,
        validated: &validated,
        seed: config.seed,
    };
    let classify = |e: Error| {
        let code = match e {
            Error::Config(_) => EXIT_CONFIG,
            Error::InSpectrum { .. } => EXIT_DOMAIN,
            _ => EXIT_GENERATION,
        };
        (code, e)
    };
    pool.install(|| {
        let mut rec = manifest::RunRecorder::new(&out_dir)?;
        match &cli.command {
            Command::Orbit => commands::orbit(&ctx, &mut rec)?,
            Command::Lyapunov => commands::lyapunov(&ctx, &mut rec)?,
            Command::Spectrum => commands::spectrum(&ctx, &mut rec)?,
            Command::Boshernitzan => commands::boshernitzan(&ctx, &mut rec)?,
            Command::CombesThomas { energy } => commands::combes_thomas(&ctx, &mut rec, *energy)?,
            Command::Uniformity => commands::uniformity(&ctx, &mut rec)?,
        }
        let echo = serde_json::to_value(&config)?;
        rec.finish(cli.command.name(), config.seed, echo)?;
        Ok(())
    })
    .map_err(classify)
}
