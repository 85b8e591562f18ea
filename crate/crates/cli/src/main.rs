//! Experiment harness for transcript-based cognitive screening. Every run
//! is driven by a TOML config (see `config`); flags only override the seed,
//! the output directory, and the feature-selection scope. Exit codes: 2 for
//! configuration or I/O problems, 3 for data validation failures, 4 when
//! every requested training run fails.

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use skipscreen_core::eval::EvalError;
use skipscreen_core::features::LeakageMode;

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Validation(String),
    Training(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Training(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Validation(m) | CliError::Training(m) => m,
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Train(t) => CliError::Training(t.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "skipscreen",
    version,
    about = "Skip-gram screening experiments on interview transcripts"
)]
struct Cli {
    /// TOML run configuration (required by all subcommands except synth).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the configured RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Select features once on the full corpus, the published protocol.
    #[arg(long, global = true, conflicts_with = "leakage_safe")]
    paper_mode: bool,

    /// Select features inside each training fold only.
    #[arg(long, global = true)]
    leakage_safe: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the sparse dataset, feature names, and baseline features.
    Extract,
    /// Cross-validate the configured models and write metrics.csv.
    Evaluate {
        /// `[models]` TOML file overriding the configured models.
        #[arg(long)]
        models: Option<PathBuf>,
    },
    /// Chart pooled-CV accuracy against the number of kept features.
    Curves {
        /// `[models]` TOML file overriding the configured models.
        #[arg(long)]
        models: Option<PathBuf>,
    },
    /// Search hyperparameters against the validation corpus.
    Grid,
    /// Generate the synthetic demonstration corpora.
    Synth,
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config is required for this subcommand".to_string()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
        for spec in &mut cfg.models {
            spec.seed = seed;
        }
    }
    if let Some(out_dir) = &cli.out_dir {
        cfg.out_dir = out_dir.clone();
    }
    if cli.paper_mode {
        cfg.leakage = LeakageMode::Global;
    }
    if cli.leakage_safe {
        cfg.leakage = LeakageMode::PerFold;
    }
    Ok(cfg)
}

/// Models for evaluate/curves: the `--models` file wins over the config.
fn select_models(
    cfg: &RunConfig,
    models_file: &Option<PathBuf>,
) -> Result<Vec<skipscreen_core::classify::ModelSpec>, CliError> {
    match models_file {
        Some(path) => {
            let (_, specs) = config::read_models_file(path, cfg.seed)?;
            Ok(specs)
        }
        None => Ok(cfg.models.clone()),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Extract => {
            let cfg = load_config(cli)?;
            commands::extract::run(&cfg)
        }
        Command::Evaluate { models } => {
            let cfg = load_config(cli)?;
            let specs = select_models(&cfg, models)?;
            commands::evaluate::run(&cfg, &specs)
        }
        Command::Curves { models } => {
            let cfg = load_config(cli)?;
            let specs = select_models(&cfg, models)?;
            commands::curves::run(&cfg, &specs)
        }
        Command::Grid => {
            let cfg = load_config(cli)?;
            commands::grid::run(&cfg)
        }
        Command::Synth => {
            let out_dir = cli
                .out_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("fixtures/synthetic"));
            commands::synth::run(&out_dir, cli.seed.unwrap_or(7))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
