use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anongame_cli::{exit_code, execute, Cli, PartialFailure};
use anyhow::Context;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let cfg = cli.resolve()?;
    let output = cfg.output.clone().unwrap_or_default();
    match execute(&cli.command, &cfg) {
        Ok(report) => emit(output.path.as_deref(), &report.render(output.format)),
        Err(err) => {
            if let Some(partial) = err.downcast_ref::<PartialFailure>() {
                emit(output.path.as_deref(), &partial.report.render(output.format))?;
            }
            Err(err)
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
