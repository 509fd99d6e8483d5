//! `translume` — batch front end over the transluminal-grating physics
//! library: ray tracing, analytic spectra, vacuum emission, stimulated
//! conversion, and parameter sweeps, all emitting plot-ready CSV or JSON.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for numerical
//! failures.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use translume_core::Engine;

use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::OutputTarget;

#[derive(Parser)]
#[command(
    name = "translume",
    version,
    about = "Transluminal space-time grating spectra: rays, emission, conversion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace characteristics through the grating and record the horizons
    Rays(RunArgs),
    /// Tabulate the analytic spectral amplitude over output orders
    Spectrum(RunArgs),
    /// Compute the spontaneous (vacuum) emission spectrum
    Vacuum(RunArgs),
    /// Compute stimulated negative-frequency conversion fractions
    Stimulated(RunArgs),
    /// Run a cartesian parameter sweep
    Sweep(RunArgs),
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::Rays(a)
            | Command::Spectrum(a)
            | Command::Vacuum(a)
            | Command::Stimulated(a)
            | Command::Sweep(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Path to the run configuration file
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to [output].dir from the config, then "."
    #[arg(long)]
    out: Option<PathBuf>,
    /// Artifact format; defaults to [output].format from the config
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Transmission engine (stimulated and sweep commands)
    #[arg(long, value_enum, default_value_t = EngineArg::Analytic)]
    engine: EngineArg,
    /// Worker-thread count; defaults to TRANSLUME_WORKERS, then all cores
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Analytic,
    Floquet,
}

impl From<EngineArg> for Engine {
    fn from(arg: EngineArg) -> Engine {
        match arg {
            EngineArg::Analytic => Engine::Analytic,
            EngineArg::Floquet => Engine::Floquet,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let args = cli.command.args();
    init_workers(args.workers)?;

    let run_cfg = RunConfig::load(&args.config)?;
    let dir = args
        .out
        .clone()
        .or_else(|| run_cfg.output.dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let format = match args.format {
        Some(FormatArg::Csv) => OutputFormat::Csv,
        Some(FormatArg::Json) => OutputFormat::Json,
        None => run_cfg.output.format,
    };
    let target = OutputTarget { dir, format };
    target.prepare()?;
    let engine: Engine = args.engine.into();

    match cli.command {
        Command::Rays(_) => commands::cmd_rays(&run_cfg, &target),
        Command::Spectrum(_) => commands::cmd_spectrum(&run_cfg, &target),
        Command::Vacuum(_) => commands::cmd_vacuum(&run_cfg, &target),
        Command::Stimulated(_) => commands::cmd_stimulated(&run_cfg, &target, engine),
        Command::Sweep(_) => commands::cmd_sweep(&run_cfg, &target, engine),
    }
}

/// Sizes the global worker pool: `--workers` wins, then the
/// `TRANSLUME_WORKERS` environment variable, then one worker per core.
fn init_workers(flag: Option<usize>) -> CliResult<()> {
    let requested = match flag {
        Some(n) => Some(n),
        None => match std::env::var("TRANSLUME_WORKERS") {
            Ok(text) => Some(text.parse::<usize>().map_err(|_| {
                CliError::Config(format!(
                    "TRANSLUME_WORKERS must be a positive integer, got {text:?}"
                ))
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = requested {
        if n == 0 {
            return Err(CliError::Config(
                "worker count must be at least 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    }
    Ok(())
}
