//! The relaxed universal functional `F̄_w`, its fixed-spectrum counterpart
//! `F_w`, and the ensemble energy as a convex program.

pub mod affine;
pub mod solvers;
pub mod spectral;

pub use affine::AffineProjector;
pub use solvers::{
    ew_two_step, ew_via_convex, f_w, fbar_w, EnsembleEnergy, FunctionalValue, SolverOptions,
};
pub use spectral::{frobenius, isotonic_nonincreasing, project_permutohedron, SpectralSet};
