//! Simulation of a damped Jaynes-Cummings quantum random walk that traps a
//! target Fock state in a cavity, together with the experimental recurrence
//! (noisy JC phase, STED-enhanced decay phase, noisy pi flip), Monte-Carlo
//! noise ensembles, and the closed-form fidelity budget.
//!
//! All rates are expressed in units of the bare coin decay rate `gamma`,
//! times in units of `1/gamma`.

pub mod analysis;
pub mod cli;
pub mod lindblad;
pub mod protocol;
pub mod quantum;
pub mod walk;

pub use quantum::{CMatrix, DensityMatrix, SystemSpace, C64};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("truncation fault at step {step}: population {leak:.3e} within 2 levels of the Fock-ladder top")]
    Truncation { step: usize, leak: f64 },
    #[error("non-stationary run: fidelity never stabilized")]
    NonStationary,
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
