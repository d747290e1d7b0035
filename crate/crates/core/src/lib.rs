//! Spectral polytopes of ensemble N-representable one-particle density
//! matrices: configuration bookkeeping, chamber enumeration, vertices and
//! facets of the polytopes, a many-fermion oracle and the relaxed
//! universal functional.

pub mod chambers;
pub mod dd;
pub mod error;
pub mod fock;
pub mod functional;
pub mod lp;
pub mod manybody;
pub mod polytope;
pub mod weights;

pub use error::{Error, Result};
pub use fock::{Configuration, ProblemDims};
pub use weights::WeightVector;
