//! Experiment runner behind the `cauchy-inv` binary.
//!
//! [`run_experiment`] turns an [`ExperimentConfig`] into a [`Report`] of
//! named pass/fail gates. The binary only parses flags and writes the report.

pub mod config;
pub mod experiment;
pub mod report;

pub use config::{ConfigError, Domain, Experiment, ExperimentConfig, Format, MapChoice, ObservableChoice};
pub use experiment::{run_experiment, ExperimentError};
pub use report::{Gate, Report};
