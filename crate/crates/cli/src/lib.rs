//! Library half of the `willmore` command: configuration, file formats and
//! the verification suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use error::CliError;
