//! Command-line front end for Bernstein-operator approximation bounds on
//! [0, 1]: evaluate B_n f, check the two-sided error estimates, sweep
//! degrees into plot-ready CSV, and compute every explicit threshold index.

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod emit;

use commands::{EXIT_HYPOTHESIS, EXIT_USAGE};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(bbounds_core::Error),
}

impl From<bbounds_core::Error> for CliError {
    fn from(e: bbounds_core::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser)]
#[command(
    name = "bbounds",
    version,
    about = "Bernstein operator error bounds: evaluate B_n f, estimate the weighted \
             second modulus of smoothness, and verify the explicit two-sided estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f and B_n f at chosen points.
    Eval(commands::EvalArgs),
    /// Check named inequality claims at one or more degrees.
    Verify(commands::VerifyArgs),
    /// Emit a CSV table of norms, moduli, and bounds over a degree range.
    Sweep(commands::SweepArgs),
    /// Compute the threshold indices for one function.
    Thresholds(commands::ThresholdsArgs),
    /// Reproduce the worked examples: thresholds, constants, spot checks.
    Examples(commands::ExamplesArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(args) => commands::run_eval(args),
        Command::Verify(args) => commands::run_verify(args),
        Command::Sweep(args) => commands::run_sweep(args),
        Command::Thresholds(args) => commands::run_thresholds(args),
        Command::Examples(args) => commands::run_examples(args),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                bbounds_core::Error::Hypothesis(_)
                | bbounds_core::Error::DegenerateInput(_)
                | bbounds_core::Error::NotFound { .. } => EXIT_HYPOTHESIS,
                _ => EXIT_USAGE,
            }
        }
    };
    std::process::exit(code);
}
