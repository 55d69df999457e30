//! Experiment runner behind the `smd` binary: sweeps over network families,
//! couplings and sizes that emit CSV tables with JSON run manifests.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command, FlagOptions};
use config::{merge, resolve};
use error::{CliResult, EXIT_OK};
use output::{emit, Report};

/// Resolve flags (and any config file) and run one subcommand.
pub fn execute(cmd: Command, flags: &FlagOptions) -> CliResult<Report> {
    let merged = merge(flags)?;
    let (config, output) = resolve(cmd, &merged)?;
    commands::execute(cmd, &config, output.workers)
}

/// Full program: parse, run, write. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_parsed(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("smd {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

fn run_parsed(cli: &Cli) -> CliResult<()> {
    let merged = merge(&cli.options)?;
    let (config, output) = resolve(cli.command, &merged)?;
    let report = commands::execute(cli.command, &config, output.workers)?;
    emit(&report, &output)
}
