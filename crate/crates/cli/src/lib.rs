//! Command-line front end for the bondperc experiments.
//!
//! Every invocation is validated completely before any sampling starts, so a
//! rejected configuration never leaves files behind.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::args::Cli;
use crate::error::{CliError, Result};

/// Run with process-wide stdout and stderr; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let command = cli.command.name();
    let (plan, output) = config::load(command, cli.command.flags())?;
    let outcome = commands::execute(command, &plan, &output)?;
    if let (Some(path), Some(data)) = (&output.path, &outcome.data) {
        std::fs::write(path, data).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    let io = |source| CliError::Io { path: "<stdout>".into(), source };
    writeln!(stdout, "{}", outcome.summary).map_err(io)?;
    if let Some(path) = &output.path {
        writeln!(stdout, "wrote {}", path.display()).map_err(io)?;
    }
    Ok(())
}
