//! `recruit`: solve, sweep, verify and simulate the two-firm recruiting game.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a check failed,
//! 3 a resource ceiling was hit.

mod args;
mod cache;
mod output;
mod simulate;
mod solve;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "recruit", version, about = "Equilibria of the two-firm multi-round recruiting game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one game and print its welfare and performance ratio.
    Solve(solve::SolveArgs),
    /// Performance ratios over a grid of round counts, qualities and rules.
    Sweep(sweep::SweepArgs),
    /// Run invariant suites and print a JSON summary.
    Verify(verify::VerifyArgs),
    /// Monte Carlo play of the canonical equilibrium.
    Simulate(simulate::SimulateArgs),
}

/// Failure classes, one per nonzero exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
    Resource(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Check(m) | Failure::Resource(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Failure::Usage(msg.into()).into()
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(f) = e.downcast_ref::<Failure>() {
        return match f {
            Failure::Usage(_) => 1,
            Failure::Check(_) => 2,
            Failure::Resource(_) => 3,
        };
    }
    match e.downcast_ref::<recruit_core::Error>() {
        Some(recruit_core::Error::ResourceLimit { .. } | recruit_core::Error::TooLarge { .. }) => 3,
        _ => 1,
    }
}

fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        let io = c.downcast_ref::<std::io::Error>().or(match c.downcast_ref::<recruit_core::Error>() {
            Some(recruit_core::Error::Io(io)) => Some(io),
            _ => None,
        });
        io.is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Simulate(a) => simulate::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // A closed downstream pipe (e.g. `| head`) is not an error.
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("recruit: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
