//! Library side of the `vislaw` command-line tool.
//!
//! Every subcommand is a plain function in [`commands`] returning an
//! [`commands::Output`], so the binary only parses arguments and prints.
//! [`audit`] runs the consolidated claim audit.

pub mod audit;
pub mod commands;
pub mod error;
pub mod tolerances;

pub use error::{exit, CliError};
pub use tolerances::Tolerances;

/// Stamp written into every JSON output and report.
pub fn generator() -> String {
    format!("vislaw {}", env!("CARGO_PKG_VERSION"))
}
