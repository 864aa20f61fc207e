use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use dcsplit::config::{LevelRange, OutputFormat, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// DC decomposition of scalar fields on convex domains, with curve-based
/// representability diagnostics.
#[derive(Parser)]
#[command(name = "dcsplit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonFlags {
    /// JSON config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Catalog field name (see `dcsplit catalog`).
    #[arg(long, global = true)]
    field: Option<String>,
    /// Coarsest mesh refinement level.
    #[arg(long, global = true)]
    level_min: Option<u32>,
    /// Finest mesh refinement level.
    #[arg(long, global = true)]
    level_max: Option<u32>,
    /// Seed for probes and family generation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Max angle (radians, in (0, pi/2)) between 3-D curve segments and
    /// their projection plane.
    #[arg(long, global = true)]
    angle_bound: Option<f64>,
    /// Report format.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<OutputFormat>,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        "both" => Ok(OutputFormat::Both),
        other => Err(format!("expected json | csv | both, got {other:?}")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Interpolate a field and export its DC decomposition.
    Decompose(CommonFlags),
    /// Variation and turn statistics over a curve family across levels.
    Criterion(CommonFlags),
    /// Refinement loop with Cauchy convergence diagnostics.
    Converge(CommonFlags),
    /// List the built-in fields.
    Catalog,
}

fn build_config(flags: &CommonFlags) -> Result<RunConfig> {
    let mut config = match &flags.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(name) = &flags.field {
        config.field.name = Some(name.clone());
        config.field.csv = None;
    }
    if let Some(min) = flags.level_min {
        config.levels = LevelRange {
            min,
            max: config.levels.max.max(min),
        };
    }
    if let Some(max) = flags.level_max {
        config.levels = LevelRange {
            min: config.levels.min.min(max),
            max,
        };
    }
    if let Some(seed) = flags.seed {
        config.seed = seed;
        config.family.seed = seed;
    }
    if let Some(out) = &flags.out {
        config.out_dir = out.clone();
    }
    if let Some(bound) = flags.angle_bound {
        config.family.angle_bound = bound;
    }
    if let Some(format) = flags.format {
        config.format = format;
    }
    Ok(config)
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Decompose(flags) => dcsplit::cmd_decompose(&build_config(flags)?),
        Command::Criterion(flags) => dcsplit::cmd_criterion(&build_config(flags)?),
        Command::Converge(flags) => dcsplit::cmd_converge(&build_config(flags)?),
        Command::Catalog => dcsplit::cmd_catalog(&mut std::io::stdout()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
