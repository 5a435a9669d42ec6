//! Command-line pipeline over the `rirdist` core: generate, analyze, filter, train,
//! eval and report, handing off through files in output directories.

pub mod args;
pub mod commands;
pub mod dataset;
pub mod error;
pub mod lock;
pub mod rooms;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => commands::generate::run(a).map(drop),
        Command::Analyze(a) => commands::analyze::run(a).map(drop),
        Command::Filter(a) => commands::filter::run(a).map(drop),
        Command::Train(a) => commands::train::run(a).map(drop),
        Command::Eval(a) => commands::eval::run(a).map(drop),
        Command::Report(a) => commands::report::run(a).map(drop),
    }
}

/// Parses `argv` (including the program name) and runs it. Parse failures, including
/// `--help`, come back as [`CliError::Usage`] carrying clap's rendered text.
pub fn run_args<I, T>(argv: I) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.render().to_string()))?;
    run(&cli)
}
