//! Batch front end for `fmkernel`: subcommands, JSON reports, cache files.

pub mod app;
pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use error::{CliError, Result};
