//! Brute-force many-fermion oracle: dense second quantization, exact
//! diagonalization, ensemble minimizers and one-particle density matrices.

pub mod operators;
pub mod random;
pub mod spectrum;

pub use operators::{
    build_hamiltonian, check_density, check_one_rdm, CMatrix, FockSpace, InteractionEntry,
    OneBodyOperator, TwoBodyInteraction,
};
pub use spectrum::{ew_exact, gamma_min, natural_occupations, spectrum, Spectrum};
