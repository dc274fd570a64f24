//! The `marc` command-line tool.

mod args;
mod commands;
mod io;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Region { theorem, common } => commands::region(*theorem, common),
        Command::Outer { theorem, common } => commands::outer(*theorem, common),
        Command::Fading { check, common } => commands::fading(*check, common),
        Command::Simulate {
            scheme,
            sweep,
            common,
        } => commands::simulate(*scheme, sweep, common),
        Command::SomarcDemo { common } => commands::somarc_demo(common),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
