//! Library half of the command-line front end: configuration parsing and the
//! command implementations, kept callable so tests can drive them directly.

pub mod commands;
pub mod config;
