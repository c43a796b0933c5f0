//! Command-line front end: one subcommand per experiment, JSON-lines output.

mod app;
pub mod table;

pub use app::{corvaja_sweep, run_cli, CorvajaSummary};
