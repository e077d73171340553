//! Configuration and file-format types for the dcqd command-line tool,
//! exposed as a library so tests and other tooling can parse the same
//! documents the binary writes.

pub mod config;
pub mod formats;
