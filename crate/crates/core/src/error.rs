use thiserror::Error;

use crate::qmetric::MetricKind;

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments outside an operation's domain (bad sizes, blocks, time steps).
    #[error("domain error: {0}")]
    Domain(String),
    /// A density matrix or state vector violates its physical invariants.
    #[error("invalid state: {0}")]
    StateValidity(String),
    /// The requested system does not fit the dense representation.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("metric {0:?} is not supported on this path")]
    UnsupportedMetric(MetricKind),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("eigendecomposition did not converge")]
    Eigen,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
