//! `qvr` — quantum vacuum radiation from refractive-index perturbations.
//!
//! Configuration-driven front end: every command takes a TOML run
//! specification and writes JSON/CSV artifacts. Identical configurations
//! (including the seed) produce byte-identical reports at any worker count.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qvr_cli::config::{parse_config, Command as RunCommand, ConfigError};
use qvr_cli::execute;
use qvr_cli::outputs::error_json;

#[derive(Debug, Parser)]
#[command(
    name = "qvr",
    version,
    about = "Quantum radiation from refractive index perturbations"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (falls back to the config, then $QVR_OUT_DIR,
    /// then ./qvr_out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override or supply the random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = runtime default). Recorded; never changes numbers.
    #[arg(long)]
    workers: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Tabulate the 4D transform of the configured profile.
    Spectrum(CommonArgs),
    /// Integrate the pair-creation observables of a static pulse.
    Radiate(CommonArgs),
    /// Emission rate of a uniformly moving pulse.
    Rate(CommonArgs),
    /// Sweep a parameter and fit the power-law exponent.
    Sweep(CommonArgs),
    /// Locate horizons and estimate their thermal emission.
    Horizon(CommonArgs),
    /// Acceleration-driven emission estimate.
    Unruh(CommonArgs),
    /// Run the invariant self-test suite.
    Validate(CommonArgs),
}

impl CliCommand {
    fn expected(&self) -> RunCommand {
        match self {
            CliCommand::Spectrum(_) => RunCommand::Spectrum,
            CliCommand::Radiate(_) => RunCommand::Radiate,
            CliCommand::Rate(_) => RunCommand::Rate,
            CliCommand::Sweep(_) => RunCommand::Sweep,
            CliCommand::Horizon(_) => RunCommand::Horizon,
            CliCommand::Unruh(_) => RunCommand::Unruh,
            CliCommand::Validate(_) => RunCommand::Validate,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            CliCommand::Spectrum(a)
            | CliCommand::Radiate(a)
            | CliCommand::Rate(a)
            | CliCommand::Sweep(a)
            | CliCommand::Horizon(a)
            | CliCommand::Unruh(a)
            | CliCommand::Validate(a) => a,
        }
    }
}

const EXIT_RUN_ERROR: u8 = 1;
const EXIT_CONFIG_ERROR: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let args = cli.command.args();

    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!(
                "{}",
                error_json("config", format!("{}: {e}", args.config.display()))
            );
            return ExitCode::from(EXIT_CONFIG_ERROR);
        }
    };
    let mut run_config = match parse_config(&text) {
        Ok(c) => c,
        Err(e @ ConfigError::Syntax { .. }) => {
            eprintln!("{}", error_json("config_syntax", e.to_string()));
            return ExitCode::from(EXIT_CONFIG_ERROR);
        }
        Err(e) => {
            eprintln!("{}", error_json("config_schema", e.to_string()));
            return ExitCode::from(EXIT_CONFIG_ERROR);
        }
    };

    if run_config.command != cli.command.expected() {
        eprintln!(
            "{}",
            error_json(
                "config_schema",
                format!(
                    "config declares command \"{}\" but the CLI invoked \"{}\"",
                    run_config.command.name(),
                    cli.command.expected().name()
                )
            )
        );
        return ExitCode::from(EXIT_CONFIG_ERROR);
    }

    // CLI overrides merge into the config before hashing, so the stamped
    // hash always describes the run that actually happened
    if let Some(seed) = args.seed {
        run_config.integrator.seed = Some(seed);
    }
    if let Some(workers) = args.workers {
        run_config.integrator.workers = workers;
    }
    // re-validate after the merge (e.g. a Monte-Carlo seed supplied by flag)
    if let Err(e) = run_config.integrator.to_spec() {
        eprintln!("{}", error_json("config_schema", e.to_string()));
        return ExitCode::from(EXIT_CONFIG_ERROR);
    }

    let out_dir = args
        .out
        .clone()
        .or_else(|| run_config.output.directory.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os("QVR_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("qvr_out"));

    if let Err(e) = execute::precheck_command(&run_config) {
        eprintln!("{}", error_json(&e.kind, e.message));
        return ExitCode::from(EXIT_CONFIG_ERROR);
    }

    match execute::execute(&run_config, &out_dir) {
        Ok(artifacts) => {
            for file in &artifacts.files {
                println!("{}", file.display());
            }
            if artifacts.success {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "{}",
                    error_json("validate", "one or more self-checks failed")
                );
                ExitCode::from(EXIT_RUN_ERROR)
            }
        }
        Err(e) => {
            eprintln!("{}", error_json(&e.kind, e.message));
            ExitCode::from(EXIT_RUN_ERROR)
        }
    }
}
