//! The `ave` command-line tool.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
pub mod source;

pub use args::Cli;
pub use error::{CliError, Result};
