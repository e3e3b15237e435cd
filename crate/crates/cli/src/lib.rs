//! Experiment runner for the lattice-square laboratory.

pub mod config;
pub mod experiments;
pub mod table;

pub use config::{ExperimentConfig, OutputFormat, OutputSpec, EXPERIMENTS};
pub use experiments::{run_experiment, run_selftest};
pub use table::{emit_table, ClauseSummary, ExperimentReport, Table};
