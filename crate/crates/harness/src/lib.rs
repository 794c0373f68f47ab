//! Experiment harness for the `quantopt` optimizers.
//!
//! Runs every (function, algorithm, seed) cell of a config, writes
//! deterministic CSV and JSONL outputs, samples objectives on grids for
//! plotting, and hosts the statistical validation suites.

pub mod config;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod output;
pub mod validate;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, Experiment, ResultRow, SummaryRow};
pub use grid::{grid_sample, Grid, Slice};
pub use output::{write_outputs, Manifest};
