//! Structured staggered-grid fields on the box `(0,L)^3` — periodic in x and
//! y, walls at `z = 0` and `z = L` — plus the discrete differential and
//! integral operators the rest of the crate consumes.

pub mod checkpoint;
mod grid;
mod ops;
mod scalar;
mod vector;

pub use grid::Grid;
pub use ops::{
    center_u, center_v, center_w, divergence, dot, dz_sq, gradient_faces, gradient_sq,
    kinetic_energy, layer_weights, max_abs_divergence, norm_sq, volume_integral, Region,
};
pub use scalar::{zip_with, ScalarField};
pub use vector::{VectorField, WallBC};
