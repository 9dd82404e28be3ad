//! Command-line front end for the graph edit distance engine.
//!
//! The binary is a thin shell over this library: every subcommand has a
//! `compute` function returning a serializable report, so integration tests
//! can drive the same code paths in-process and inspect structured results
//! instead of scraping stdout.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;

pub use args::{Cli, Command};
pub use error::CliError;

/// Dispatches a parsed command line. Errors are returned rather than
/// printed so the caller controls the exit code.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ged(args) => commands::ged::run(args),
        Command::Matrix(args) => commands::matrix::run(args),
        Command::Knn(args) => commands::knn::run(args),
        Command::Crossover(args) => commands::crossover::run(args),
        Command::Gen(args) => commands::generate::run(args),
        Command::Bench(args) => commands::bench::run(args),
    }
}
