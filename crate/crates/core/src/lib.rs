//! Subsystem relaxation diagnostics for spin chains.
//!
//! The crate computes reduced density matrices of exactly diagonalized spin
//! chains, distances between quantum states, and the rate at which a
//! subsystem's reduced state changes in time. A free-fermion path handles the
//! transverse-field Ising quench at system sizes far beyond dense storage.

pub mod error;
pub mod freefermion;
pub mod linalg;
pub mod propagate;
pub mod qmetric;
pub mod sampling;
pub mod spinchain;
pub mod steadystate;

pub use error::{Error, Result};
pub use linalg::C64;
pub use qmetric::{Block, BlockLayout, DensityMatrix, MetricKind, StateVector};
