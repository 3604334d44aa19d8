//! Command-line driver for `qsg-core`: configuration, output files and the
//! `reproduce`, `protocol`, `sweep` and `fields-map` commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{Format, RunConfig};
pub use error::CliError;
