//! Command-line front end: file formats, subcommands and the checks behind
//! `selftest` and the acceptance suite.

pub mod bench;
pub mod checks;
pub mod commands;
pub mod io;
pub mod stats;
