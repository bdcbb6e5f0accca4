//! Command-line front end: every subcommand writes CSV or JSON data with the
//! resolved run configuration embedded.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use pibi::sdp::ClarabelBackend;

use args::{Cli, RunConfig};
use error::{CliError, EXIT_OK, EXIT_USAGE};

fn print_schema(subcommand: Option<&str>) {
    let mut root = Cli::command();
    let help = match subcommand.and_then(|s| root.find_subcommand_mut(s)) {
        Some(sub) => sub.render_help(),
        None => root.render_help(),
    };
    eprintln!("{help}");
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return EXIT_OK;
        }
        Err(e) => {
            let _ = e.print();
            if e.kind() == ErrorKind::InvalidSubcommand {
                print_schema(None);
            }
            return EXIT_USAGE;
        }
    };
    let name = cli.command.name();
    let result = ClarabelBackend::from_env()
        .map_err(CliError::from)
        .and_then(|backend| {
            cli.command.validate()?;
            let config = RunConfig {
                tool: "pibi",
                version: env!("CARGO_PKG_VERSION"),
                command: &cli.command,
                sdp_accuracy: backend.accuracy,
            };
            commands::execute(&config)
        });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("pibi {name}: {e}");
            if let CliError::Usage(_) = e {
                print_schema(Some(name));
            }
            e.exit_code()
        }
    }
}
