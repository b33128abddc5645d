//! `graphgen`: dataset generation, program search, execution, rendering and
//! metric evaluation.
//!
//! Exit status is 0 on success, 1 on internal or I/O failure and 2 on bad
//! usage or bad input.

mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use commands::{Cli, Failure};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(1)
        }
    }
}
