//! Command-line front end for the `kbmrac` adaptive control library.

pub mod args;
pub mod commands;
pub mod report;

pub use commands::CliError;
