//! Ensemble eddy viscosity (EEV) shear-flow simulator and verification suite.
//!
//! The crate has five subsystems:
//!
//! * [`fields`] — staggered-grid scalar/vector fields on the box `(0,L)^3`
//!   (periodic in x,y, walls at z=0,L) and the discrete operators built on them.
//! * [`ensemble`] — ensemble mean/fluctuation statistics and the turbulent
//!   viscosity `nu_turb = mu * tau * |u'|_e^2` shared by all realizations.
//! * [`solver`] — IMEX time integration of the J-member system with shear
//!   boundary conditions, incompressibility projection and a per-step energy
//!   ledger.
//! * [`diagnostics`] — dissipation rates, effective viscosity, near-wall slab
//!   statistics and the evaluation of the dissipation bounds.
//! * [`bounds`] — closed-form constants (Bliss/Hardy) and standalone numerical
//!   verification of the inequalities the bound evaluation relies on.

pub mod bounds;
pub mod diagnostics;
pub mod ensemble;
pub mod error;
pub mod fields;
pub mod solver;

pub use error::CoreError;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoreError>;
