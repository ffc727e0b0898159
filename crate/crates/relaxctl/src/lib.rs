//! Scenario sweeps over spin-chain relaxation diagnostics.
//!
//! A TOML [`config::ExperimentConfig`] names a scenario, the chain lengths,
//! subsystem sizes and metrics. [`runner::run_scenario`] averages over time
//! windows, block positions and disorder realizations, and [`emit`] writes
//! the rows as CSV or JSON.

pub mod config;
pub mod emit;
pub mod error;
pub mod provenance;
pub mod runner;
pub mod schedule;

pub use config::{ExperimentConfig, ProductState, Scenario, WindowRule};
pub use emit::{Format, Row, SweepResult};
pub use error::{Error, Result};
pub use runner::run_scenario;
