//! Command-line harness around `gadgetlab-core`: compile, energy, verify,
//! sweep, swcheck and bounds, with CSV output.

pub mod bounds_suite;
pub mod config;
pub mod pipeline;
pub mod record;
pub mod swcheck;

use std::path::Path;

use gadgetlab_core::pauli::parse_hamiltonian_file;
use gadgetlab_core::PauliSum64;
use thiserror::Error;

pub use bounds_suite::{run_bounds, BoundsReport};
pub use config::{Axis, CommandKind, GadgetMode, RunConfig};
pub use pipeline::{compile, energy, sweep_target, verify_target, Compilation, SweepReport};
pub use record::{BoundRecord, ScalingRecord};
pub use swcheck::{swcheck_target, GadgetCheck, SwCheckReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] gadgetlab_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Output(#[from] anyhow::Error),
}

/// Exit status for a run whose numbers violated a checked inequality.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status for configuration, input or numerical errors.
pub const EXIT_ERROR: i32 = 2;

pub fn load_target(path: &Path) -> Result<PauliSum64, HarnessError> {
    Ok(parse_hamiltonian_file(path)?)
}
