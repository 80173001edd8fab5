//! Experiment runner for the `vecnet` approximation pipeline: JSON configs,
//! named presets, ε sweeps and CSV/JSON reports.

pub mod config;
pub mod error;
pub mod experiment;
pub mod presets;
pub mod report;

pub use config::{
    DualConfig, ExperimentConfig, FamilyConfig, FitSettings, OutputConfig, SeminormConfig,
};
pub use error::{CliError, Result};
pub use experiment::{run_experiment, Experiment, ExperimentReport, RunReport};
pub use report::{emit_report, read_csv, read_report, CsvRow, OutputPaths, CSV_COLUMNS};
