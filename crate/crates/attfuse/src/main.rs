//! `attfuse`: benchmark harness for the attitude-fusion filters.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

mod args;
mod commands;
mod dataset_io;
mod error;
mod svg;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version are not usage errors
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };

    let result = match &cli.command {
        Command::Run(args) => commands::cmd_run(args),
        Command::Sweep(args) => commands::cmd_sweep(args),
        Command::Bode(args) => commands::cmd_bode(args),
        Command::Synth(args) => commands::cmd_synth(args),
        Command::Bench(args) => commands::cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
