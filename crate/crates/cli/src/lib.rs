//! File formats, parallel drivers and the `ensc` command line for
//! `ensc-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod parallel;
pub mod verify;

pub use error::{CliError, CliResult};
