//! Front end for `ces-dual`.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on a usage or parameter error.

pub mod args;
pub mod commands;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use thiserror::Error;

pub use args::{Cli, Command, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            _ => 2,
        }
    }
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

fn output_of(cmd: &Command) -> &args::OutputArgs {
    match cmd {
        Command::SpectrumEs(a) => &a.output,
        Command::SpectrumCes(a) => &a.output,
        Command::DualityCheck(a) => &a.output,
        Command::ExportWf(a) => &a.output,
        Command::VerifyAll(a) => a,
    }
}

/// Runs the command, writing to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut sink: Box<dyn Write> = match &output_of(&cli.command).out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let outcome = run_to(cli, &mut *sink)?;
    sink.flush()?;
    Ok(outcome)
}

/// Runs the command against an arbitrary writer.
pub fn run_to(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::SpectrumEs(a) => commands::spectrum_es(a, out),
        Command::SpectrumCes(a) => commands::spectrum_ces(a, out),
        Command::DualityCheck(a) => commands::duality_check(a, out),
        Command::ExportWf(a) => commands::export_wf(a, out),
        Command::VerifyAll(a) => commands::verify_all_cmd(a, out),
    }
}
