//! `spinenv` command-line runner.
//!
//! Exit codes: 0 ok, 1 configuration error, 2 numerical diagnostic,
//! 3 oracle size cap. `SPINENV_THREADS` sets the worker thread count.

mod commands;
mod config;
mod error;
mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Output;

const THREADS_VAR: &str = "SPINENV_THREADS";

#[derive(Parser, Debug)]
#[command(name = "spinenv", version, about = "Two qubits, two XX-chain environments: concurrence dynamics")]
struct Cli {
    /// TOML experiment configuration; defaults are used when absent.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,

    /// Override a configuration key, e.g. `--set J0=0.5` or `--set A.h=2`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    /// Output directory (overrides `output` in the configuration).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Also write a matplotlib script next to every CSV.
    #[arg(long, global = true)]
    plot: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Concurrence time series of the configured initial state.
    Trace,
    /// Sudden-death time.
    Esd,
    /// Revival time.
    Revival,
    /// Windowed averages of the antiparallel and parallel concurrence.
    Average,
    /// One summary row per value of a configuration key.
    Sweep {
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<String>,
    },
    /// Parameter set of a named figure: 2, 3a, 3b, 4a, 4b, 5a, 5b or 6.
    Figure {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(commands::FIGURES))]
        id: String,
    },
    /// Compare the pipeline with exact diagonalization on short chains.
    Verify {
        #[arg(long = "N", value_name = "N", default_value_t = 6)]
        n: usize,
    },
}

fn load(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(dir) = &cli.output {
        cfg.output = dir.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = value
        .parse()
        .map_err(|_| CliError::Config(format!("{THREADS_VAR}: '{value}' is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("{THREADS_VAR}: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let cfg = load(&cli)?;
    let out = Output { dir: cfg.output.clone(), plot: cli.plot };
    match &cli.command {
        Command::Trace => commands::trace(&cfg, &out),
        Command::Esd => commands::esd(&cfg, &out),
        Command::Revival => commands::revival(&cfg, &out),
        Command::Average => commands::average(&cfg, &out),
        Command::Sweep { param, values } => commands::sweep(&cfg, &out, param, values),
        Command::Figure { id } => commands::figure(&cfg, &out, id),
        Command::Verify { n } => commands::verify(&cfg, &out, *n),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are configuration errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
