//! `ptkdv` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parameter
//! error, 3 convergence failure (partial outputs kept), 4 dynamics abort.

mod args;
mod commands;
mod literal;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{load_config, merge, Cli, Command};
use commands::{Failure, EXIT_USAGE};

fn dispatch(cli: &Cli) -> commands::Outcome {
    let config = load_config(cli.config.as_deref()).map_err(Failure::usage)?;
    let root = cli.out_root.as_path();
    match &cli.command {
        Command::Curve(a) => commands::curve::run(&merge(a, config.get("curve")).map_err(Failure::usage)?, root),
        Command::Evolve(a) => commands::evolve::run(&merge(a, config.get("evolve")).map_err(Failure::usage)?, root),
        Command::Charges(a) => commands::charges::run(&merge(a, config.get("charges")).map_err(Failure::usage)?, root),
        Command::Specfun(a) => commands::specfun::run(a),
        Command::Verify(a) => commands::verify::run(&merge(a, config.get("verify")).map_err(Failure::usage)?, root),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code
        }
    };
    ExitCode::from(u8::try_from(code).unwrap_or(EXIT_USAGE as u8))
}
