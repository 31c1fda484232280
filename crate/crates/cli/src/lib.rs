//! Command-line front end of the cavscat scattering engine: configuration
//! files, parameter scans and figure datasets, all written as CSV.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod manifest;

pub use error::{CliError, CliResult};
