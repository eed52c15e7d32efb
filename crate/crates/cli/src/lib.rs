//! Library side of the `sumdiff` command: configuration, export format and
//! the `extract`, `verify` and `sweep` commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod export;

pub use error::{CliError, CliResult};
