//! Library side of the `ifs-spectra` command: config handling, commands and rendering.

pub mod commands;
pub mod config;
pub mod error;
pub mod render;

pub use commands::{run, Command, Outcome};
pub use config::RunConfig;
pub use error::{exit, CliError, CliResult};
