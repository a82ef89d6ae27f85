//! Configuration, orchestration and file output for the `vortexlab` command.

pub mod commands;
pub mod config;
mod error;
pub mod output;
pub mod plot;

pub use error::{CliError, Result};
