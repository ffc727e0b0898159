use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use relaxctl::{emit, run_scenario, ExperimentConfig, Format, Scenario};

#[derive(Parser)]
#[command(name = "relaxometer", version, about = "Subsystem relaxation sweeps for spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its results to a directory.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; overrides the config file.
        #[arg(long, env = "RELAXOMETER_WORKERS")]
        workers: Option<usize>,
        /// Base seed; overrides the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Print the available scenario kinds.
    ListScenarios,
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cli: Cli) -> relaxctl::Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            workers,
            seed,
            format,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            let result = run_scenario(&cfg)?;
            let path = emit::emit(&result, format, &out)?;
            println!("{}", path.display());
        }
        Command::ListScenarios => {
            for kind in Scenario::KINDS {
                println!("{kind}");
            }
        }
        Command::Validate { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            cfg.validate()?;
            cfg.check_resources()?;
            println!("ok: {}", cfg.scenario);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
