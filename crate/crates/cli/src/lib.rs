//! Experiment runner behind the `anongame` binary.
//!
//! [`run`] resolves the configuration, executes one command and returns the
//! rendered report; [`exit_code`] maps failures to process exit statuses
//! (2 usage, 3 solver failure, 4 infeasible contract problem).

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;

use std::fmt;

pub use crate::cli::{Cli, Command};
use crate::config::ExperimentConfig;
pub use crate::output::Report;

/// Invalid invocation or configuration.
#[derive(Debug)]
pub struct UsageError(pub String);

impl UsageError {
    pub fn new(msg: impl Into<String>) -> Self {
        UsageError(msg.into())
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A command that failed after producing some output.
#[derive(Debug)]
pub struct PartialFailure {
    pub report: Report,
    pub step: usize,
    pub source: anongame::Error,
}

impl fmt::Display for PartialFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "round {} failed", self.step)
    }
}

impl std::error::Error for PartialFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

/// Runs the selected command on an already resolved configuration.
pub fn execute(command: &Command, cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    cfg.game.validate().map_err(|e| UsageError::new(e.to_string()))?;
    match command {
        Command::SolveStatic => commands::solve_static(cfg),
        Command::Sweep(_) => commands::sweep(cfg),
        Command::Contract(_) => commands::contract(cfg),
        Command::Simulate(_) => commands::simulate(cfg),
    }
}

/// Resolves flags and configuration, runs the command and renders it.
pub fn run(cli: &Cli) -> anyhow::Result<String> {
    let cfg = cli.resolve()?;
    let format = cfg.output.clone().unwrap_or_default().format;
    execute(&cli.command, &cfg).map(|r| r.render(format))
}

pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<UsageError>() || cause.is::<serde_json::Error>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<anongame::Error>() {
            return match e {
                anongame::Error::InvalidParameter { .. } => 2,
                anongame::Error::EquilibriumNotFound { .. } => 3,
                anongame::Error::Infeasible(_) => 4,
            };
        }
    }
    1
}
