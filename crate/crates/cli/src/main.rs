use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod manifest;

use args::{Cli, Command};
use commands::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Optimize(a) => commands::optimize(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Map(a) => commands::map(a),
        Command::ValidateSingleTile(a) => commands::validate_single_tile(a),
        Command::Batch(a) => commands::batch(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Env(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
