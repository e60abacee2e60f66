use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use cableway_cli::{run, Cli, Outcome, EXIT_CONFIG};
use clap::Parser;

fn emit(outcome: &Outcome) -> anyhow::Result<()> {
    match &outcome.destination {
        Some(path) => fs::write(path, &outcome.report)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout()
            .write_all(outcome.report.as_bytes())
            .context("cannot write to standard output")?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() {
                EXIT_CONFIG as u8
            } else {
                0
            });
        }
    };
    let outcome = run(&cli);
    eprint!("{}", outcome.diagnostics);
    if let Err(err) = emit(&outcome) {
        eprintln!("error: {err:#}");
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    ExitCode::from(outcome.code as u8)
}
