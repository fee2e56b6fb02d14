//! Command-line harness for the quench-ansatz experiments: configuration,
//! seeded parallel execution and persistence of result tables.

pub mod config;
pub mod output;

mod commands;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::{Format, RunConfig};
use output::{encode, write_file, FileHeader, RunManifest, Table, TOOL_VERSION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("configuration error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Core(#[from] quenchscape_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv encoding failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Subcommand)]
pub enum Command {
    /// Spacing-ratio histograms and phase labels per disorder strength.
    LevelStats,
    /// First and second frame potentials of the quench ensemble versus depth.
    FramePotential,
    /// Loss variance, its bounds and frame potentials versus depth.
    BpScan,
    /// Half-chain entanglement entropy versus depth.
    EntropyScan,
    /// Saturation depths per phase and the width of the window between them.
    Regimes,
    /// Ground-state energy benchmark.
    Vqe,
    /// Max-Cut benchmark.
    Maxcut,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::LevelStats,
        Command::FramePotential,
        Command::BpScan,
        Command::EntropyScan,
        Command::Regimes,
        Command::Vqe,
        Command::Maxcut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::LevelStats => "level-stats",
            Command::FramePotential => "frame-potential",
            Command::BpScan => "bp-scan",
            Command::EntropyScan => "entropy-scan",
            Command::Regimes => "regimes",
            Command::Vqe => "vqe",
            Command::Maxcut => "maxcut",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "quenchscape", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl Cli {
    /// Loads the config file and applies command-line overrides.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(w) = self.workers {
            cfg.workers = Some(w);
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        Ok(cfg)
    }
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if workers == Some(0) {
        return Err(CliError::Config("workers must be >= 1".into()));
    }
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()?)
}

/// Computes the result tables of `command` on a pool of `cfg.workers`
/// threads without touching the filesystem.
pub fn compute(command: Command, cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    pool(cfg.workers)?.install(|| commands::compute(command, cfg))
}

/// File name of a table: `<subcommand>_<table>.<ext>`.
pub fn file_name(command: Command, table: &Table, format: Format) -> String {
    format!("{}_{}.{}", command.name(), table.name, format.extension())
}

/// Computes `command` and writes its tables, the effective configuration
/// and a manifest into `cfg.out`.
pub fn run(command: Command, cfg: &RunConfig) -> Result<RunManifest, CliError> {
    let hash = cfg.hash(command)?;
    let pool = pool(cfg.workers)?;
    let workers = pool.current_num_threads();
    let start = Instant::now();
    let tables = pool.install(|| commands::compute(command, cfg))?;
    let wall_clock_seconds = start.elapsed().as_secs_f64();

    std::fs::create_dir_all(&cfg.out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", cfg.out.display())))?;
    let mut files = Vec::with_capacity(tables.len() + 1);
    for table in &tables {
        let header = FileHeader::new(command.name(), table, &hash, cfg.seed);
        let bytes = encode(table, &header, cfg.format)?;
        files.push(write_file(
            &cfg.out,
            &file_name(command, table, cfg.format),
            &bytes,
        )?);
    }
    let config_name = format!("{}_config.toml", command.name());
    files.push(write_file(
        &cfg.out,
        &config_name,
        cfg.to_toml()?.as_bytes(),
    )?);

    let manifest = RunManifest {
        tool: "quenchscape",
        version: TOOL_VERSION,
        subcommand: command.name().to_owned(),
        config_hash: hash,
        seed: cfg.seed,
        workers,
        wall_clock_seconds,
        files,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    write_file(
        &cfg.out,
        &format!("{}_manifest.json", command.name()),
        &bytes,
    )?;
    Ok(manifest)
}
