//! Command-line front end for `limpoly`.

pub mod commands;
pub mod literal;
pub mod report;

pub use commands::{run, Cli, Outcome, EXIT_COUNTEREXAMPLE, EXIT_ERROR, EXIT_OK};
pub use report::Report;
