//! Command implementations behind the `tribadic` binary.

pub mod commands;
pub mod output;
