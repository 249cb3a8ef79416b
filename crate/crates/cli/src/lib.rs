//! Command implementations behind the `mathrank` binary.

pub mod commands;
pub mod tables;

pub use commands::{run, Cli, Command, Outcome};
