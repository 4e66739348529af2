//! Time integration of the ensemble system: explicit skew-symmetric
//! advection, implicit variable-coefficient diffusion with the shared eddy
//! viscosity, incompressibility projection, and the per-step energy ledger.

pub mod advection;
pub mod config;
pub mod diffusion;
pub mod pcg;
pub mod projection;
mod run;
mod state;

pub use config::{PerturbationSpec, SimConfig};
pub use run::{run, RunResult};
pub use state::{advance, initialize_ensemble, EnsembleState, LedgerEntry};
