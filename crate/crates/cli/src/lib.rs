//! Command-line front end for `proxavg`.
//!
//! Exit status: 0 on success, 2 for bad arguments or unreadable inputs, 3 when
//! a run does not converge under `--strict`, 4 on numerical failure.

mod args;
mod commands;
mod error;
mod output;
mod settings;

use clap::error::ErrorKind;
use clap::Parser;
use std::ffi::OsString;
use std::io::Write;

pub use args::{Cli, Command};
pub use error::CliError;
pub use output::num as format_number;
pub use settings::{parse_config, RunConfig, PRESETS};

/// Parses `args` (program name first) and runs the command, writing the main
/// output to `--out` or `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::usage(e.to_string()))?;
    execute(&cli.command, stdout)
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    let opts = command.opts();
    let cfg = settings::load(
        opts.preset.as_deref(),
        opts.config.as_deref(),
        &opts.pairs(),
    )?;
    let report = match command {
        Command::Eval(_) => commands::eval(&cfg)?,
        Command::Solve(_) => commands::solve_cmd(&cfg)?,
        Command::Homotopy(_) => commands::homotopy(&cfg, false)?,
        Command::Table(_) => commands::homotopy(&cfg, true)?,
        Command::Feasibility(_) => commands::feasibility(&cfg)?,
    };
    match &cfg.out {
        Some(path) => output::write_file(path, &report.text)?,
        None => stdout
            .write_all(report.text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    for (path, contents) in &report.files {
        output::write_file(path, contents)?;
    }
    match report.deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Full process behaviour: help and version go to stdout with status 0,
/// errors go to `stderr` with their exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return 2;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "proxavg {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
