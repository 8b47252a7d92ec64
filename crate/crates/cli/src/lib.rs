//! Command-line front end: argument definitions, text formats and the
//! subcommand implementations behind the `toeplitz` binary.

pub mod args;
pub mod commands;
pub mod format;
pub mod poly;
