mod args;
mod commands;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::Cli;

/// Exit statuses beyond clap's own 2 for malformed flags.
const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 3;
const EXIT_OUTPUT: u8 = 4;

#[derive(Debug)]
struct OutputError {
    target: String,
    source: std::io::Error,
}

impl std::fmt::Display for OutputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cannot write {}: {}", self.target, self.source)
    }
}

impl std::error::Error for OutputError {}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| {
        OutputError {
            target: format!("output file {}", path.display()),
            source,
        }
        .into()
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED_CHECK),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = if err.is::<OutputError>() {
                EXIT_OUTPUT
            } else {
                EXIT_INVALID_INPUT
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let common = &cli.common;
    if let Some(n) = common.threads {
        anyhow::ensure!(n > 0, "thread count must be positive");
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure worker threads")?;
    }
    let config = common.optimizer.config();
    config.validate()?;

    let rendered = commands::run(&cli.command, common.format, common.digits, config)?;
    match &common.output {
        Some(path) => write_file(path, &rendered.body)?,
        None => std::io::stdout()
            .write_all(&rendered.body)
            .map_err(|source| OutputError {
                target: "to stdout".into(),
                source,
            })?,
    }
    Ok(!rendered.failed)
}
