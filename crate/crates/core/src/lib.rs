//! Exact stationary states of closed quantum systems under Poissonian resetting,
//! with the two-spin model, a trajectory sampler and parameter sweeps.

pub mod cmatrix;
pub mod dual;
pub mod error;
pub mod mc;
pub mod observables;
pub mod optimize;
pub mod sweep;
pub mod system;
pub mod twospin;

pub use cmatrix::{Complex, ComplexMatrix, HermitianEigensystem};
pub use error::{Error, Result};
pub use system::{partial_trace, Keep, QuantumSystem, ResetSpec, SubsystemSplit};
pub use twospin::TwoSpinParams;
