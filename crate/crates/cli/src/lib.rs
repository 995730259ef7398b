//! Library side of the `electionpulse` command: configuration, run
//! manifests, atomic artifact output and subcommand execution.

pub mod config;
pub mod manifest;
pub mod output;
pub mod run;
