use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geodesic_cli::{load_config, run, EXIT_ERROR};

#[derive(Parser)]
#[command(
    name = "geodesic",
    version,
    about = "Closed geodesic searches on surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the search described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override a config field, e.g. `--set discretization.m=256`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { config, overrides } = cli.command;
    let result = load_config(&config, &overrides).and_then(|cfg| run(&cfg));
    match result {
        Ok(summary) => {
            eprintln!("{}: {}", summary.status, summary.report.display());
            ExitCode::from(summary.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
