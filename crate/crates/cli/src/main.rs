use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;

use config::Config;
use error::CliError;

#[derive(Parser)]
#[command(name = "taste", version, about = "Aspect sentiment triplet extraction with a dependency Tree-LSTM")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, short, global = true, env = "TASTE_CONFIG")]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set train.epochs=3`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train on SST and write the best-dev checkpoint and the training curve.
    Train,
    /// Run a checkpoint over parsed sentences and write triplet predictions.
    Extract,
    /// Score predictions against gold triplets.
    Evaluate,
    /// Train, extract and evaluate in one go.
    Reproduce,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_deref(), &cli.overrides)?;
    match cli.command {
        Command::Train => commands::cmd_train(&cfg),
        Command::Extract => commands::cmd_extract(&cfg),
        Command::Evaluate => {
            print!("{}", commands::cmd_evaluate(&cfg)?.render_text());
            Ok(())
        }
        Command::Reproduce => {
            commands::cmd_train(&cfg)?;
            commands::cmd_extract(&cfg)?;
            print!("{}", commands::cmd_evaluate(&cfg)?.render_text());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
