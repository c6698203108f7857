//! `oswlab`: profiles, simulations, collapse and cusp studies, and the
//! acceptance suite of the osw-core laboratory.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 for
//! usage or configuration errors and 3 for numerical breakdown.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

use osw_cli::commands::{self, RunError};
use osw_cli::config::{Command, ConfigError, ExperimentConfig, Source};
use osw_cli::output::{prepare_dir, RunManifest, Status, Writer};

#[derive(Debug, Parser)]
#[command(name = "oswlab", version, about = "Self-similar blow-up laboratory for the OSW vorticity models")]
struct Cli {
    /// Configuration file of key=value pairs and [command] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multiplies every error tolerance.
    #[arg(long, value_parser = positive_float)]
    tol_scale: Option<f64>,
    /// Seed of the randomized test families.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sweeps and the acceptance suite.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Command (profile, sim, verify, collapse, cusp, report) followed by key=value overrides.
    items: Vec<String>,
}

fn positive_float(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, found `{s}`")),
    }
}

#[derive(Debug, Error)]
enum AppError {
    #[error("configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] RunError),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) | AppError::Usage(_) => 2,
            AppError::Run(e) => e.exit_code(),
        }
    }
}

fn resolve(cli: Cli) -> Result<ExperimentConfig, AppError> {
    let text = match &cli.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut items = cli.items;
    if let Some(first) = items.first_mut() {
        if !first.contains('=') {
            let command: Command =
                first.parse().map_err(|_| AppError::Usage(format!("unknown command `{first}`")))?;
            *first = format!("command={}", command.name());
        }
    }
    let mut config = ExperimentConfig::from_sources(&[Source::Text(&text), Source::Arguments(&items)])?;
    config.override_globals(cli.out, cli.seed, cli.tol_scale, cli.jobs.map(|j| j as usize));
    Ok(config)
}

fn execute(config: &ExperimentConfig) -> Result<Status, AppError> {
    prepare_dir(&config.out)
        .map_err(|e| AppError::Usage(format!("output directory {} is not writable: {e}", config.out.display())))?;
    let started = Instant::now();
    let mut writer = Writer::new(&config.out);
    let checks = commands::execute(config, &mut writer)?;
    let status = Status::of(&checks);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let total = checks.len();
    let manifest = RunManifest {
        tool: "oswlab",
        version: env!("CARGO_PKG_VERSION"),
        core_version: osw::VERSION,
        config: config.echo(),
        status,
        checks,
        outputs: writer.files().to_vec(),
    };
    writer.json("manifest.json", &manifest).map_err(RunError::from)?;
    let elapsed = started.elapsed().as_secs_f64();
    fs::write(config.out.join("timing.txt"), format!("wall_clock_seconds {elapsed:.3}\n")).map_err(RunError::from)?;
    println!(
        "{}: {total} checks, {failed} failed, status {status:?}; {elapsed:.1} s; outputs in {}",
        config.command.name(),
        config.out.display()
    );
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match resolve(cli).and_then(|config| execute(&config)) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("oswlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
