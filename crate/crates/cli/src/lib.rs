//! Library side of the `cpfluct` binary: argument types, commands, report
//! schema and rendering.

pub mod args;
pub mod commands;
pub mod render;
pub mod report;

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use args::{Cli, Command, Format, OutputArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cpfluct_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("format `{0}` is not available for this command")]
    Format(&'static str),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

fn sink(out: &OutputArgs) -> Result<Box<dyn Write>, CliError> {
    Ok(match &out.output {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(
    out: &OutputArgs,
    default: Format,
    body: impl FnOnce(Format, &mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let mut w = sink(out)?;
    body(out.format.unwrap_or(default), &mut *w)?;
    w.flush()?;
    Ok(())
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Force(a) => {
            let r = commands::force(a)?;
            emit(&a.out, Format::Text, |f, w| render::force(&r, f, w))?;
        }
        Command::Fluct(a) => {
            let r = commands::fluct(a)?;
            emit(&a.out, Format::Text, |f, w| render::fluct(&r, f, w))?;
        }
        Command::Scan(a) => {
            let r = commands::scan(a)?;
            emit(&a.out, Format::Csv, |f, w| render::scan(&r, f, w))?;
        }
        Command::Crossover(a) => {
            let r = commands::crossover(a)?;
            emit(&a.out, Format::Text, |f, w| render::crossover(&r, f, w))?;
        }
        Command::Experiment(a) => {
            let r = commands::experiment(a)?;
            emit(&a.out, Format::Text, |f, w| render::experiment(&r, f, w))?;
        }
        Command::Verify(a) => {
            let r = commands::verify(a)?;
            emit(&a.out, Format::Text, |f, w| render::verify(&r, f, w))?;
            if !r.pass {
                if let Some(worst) = render::worst_case(&r) {
                    eprintln!("verification failed; worst case: {worst}");
                }
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Entry point shared by the binary: parse, run, map errors to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
