//! `qnm`: batch front-end for the quantum Newton method workbench.
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver failure.

mod args;
mod manifest;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command, TableFormat};
use manifest::{RunCommand, RunManifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 3,
        }
    }
}

/// Write to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    let manifest = match &cli.command {
        Command::Replay { manifest } => {
            let mut m = RunManifest::load(manifest)?;
            if let Some(name) = cli.name {
                m.name = name;
            }
            RunManifest::new(m.name, m.run)
        }
        cmd => {
            let run = cmd.to_run()?.expect("not a replay");
            let name = cli.name.clone().unwrap_or_else(|| cmd.default_name().to_string());
            RunManifest::new(name, run)
        }
    };
    if let (Command::EstimateResources(a), RunCommand::EstimateResources { unknowns, accuracies, .. }) =
        (&cli.command, &manifest.run)
    {
        if a.format == TableFormat::Csv {
            emit(&run::resource_table(unknowns, accuracies, a.equation_form, true)?);
            run::execute(&manifest, &run::out_dir())?;
            return Ok(());
        }
    }
    let report = run::execute(&manifest, &run::out_dir())?;
    emit(&report.lines.iter().map(|l| format!("{l}\n")).collect::<String>());
    for f in &report.files {
        eprintln!("wrote {}", f.display());
    }
    match report.failure {
        Some(msg) => Err(CliError::Solver(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qnm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
