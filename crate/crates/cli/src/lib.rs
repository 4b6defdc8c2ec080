//! File formats and subcommands of the `ncszego` command-line tool.

pub mod commands;
pub mod docs;
pub mod error;
pub mod sample;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
