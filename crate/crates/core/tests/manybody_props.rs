use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_polytope::chambers::LowestSequence;
use spectral_polytope::fock::{config_energy, enumerate_configs, DEFAULT_CONFIG_CAP};
use spectral_polytope::manybody::random::{
    random_hermitian, random_interaction, random_majorized, random_one_body, random_unitary,
    random_weights,
};
use spectral_polytope::manybody::spectrum::conjugate_diagonal;
use spectral_polytope::manybody::*;
use spectral_polytope::polytope::facets::{facets_symbolic, FacetSystem};
use spectral_polytope::polytope::{vertex_from_sequence, Polytope};
use spectral_polytope::{Error, ProblemDims, WeightVector};

fn hamiltonian(n: usize, d: usize, rng: &mut ChaCha8Rng) -> (FockSpace, CMatrix) {
    let space = FockSpace::new(n, d).unwrap();
    let h = random_one_body(d, 1.0, rng);
    let v = random_interaction(d, 0.5, rng);
    let m = build_hamiltonian(&h, &v, &space).unwrap();
    (space, m)
}

fn energy(h: &CMatrix, g: &CMatrix) -> f64 {
    (h * g).trace().re
}

fn instance_dims(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let n = rng.random_range(1..=3);
    (n, rng.random_range(n + 1..=5))
}

#[test]
fn variational_principle_on_fixed_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let (n, d) = instance_dims(&mut rng);
        let (space, h) = hamiltonian(n, d, &mut rng);
        let r = rng.random_range(1..=space.dim().min(4));
        let w = random_weights(r, &mut rng);
        let ew = ew_exact(&spectrum(&h).unwrap(), &w).unwrap();
        let padded = w.padded(space.dim()).unwrap();
        for _ in 0..100 {
            let g = conjugate_diagonal(&random_unitary(space.dim(), &mut rng), &padded);
            assert!(energy(&h, &g) >= ew - 1e-9);
        }
    }
}

#[test]
fn variational_principle_on_relaxed_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..100 {
        let (n, d) = instance_dims(&mut rng);
        let (space, h) = hamiltonian(n, d, &mut rng);
        let r = rng.random_range(1..=space.dim().min(4));
        let w = random_weights(r, &mut rng);
        let ew = ew_exact(&spectrum(&h).unwrap(), &w).unwrap();
        for _ in 0..100 {
            let x = random_majorized(w.as_f64(), space.dim(), 3, &mut rng);
            let g = conjugate_diagonal(&random_unitary(space.dim(), &mut rng), &x);
            check_density(&g).unwrap();
            assert!(energy(&h, &g) >= ew - 1e-9);
        }
    }
}

#[test]
fn minimizer_occupations_lie_in_the_polytope() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut systems: HashMap<(usize, usize, usize), FacetSystem> = HashMap::new();
    let mut checked = 0;
    while checked < 200 {
        let n = rng.random_range(2..=3);
        let d = rng.random_range(n + 1..=5);
        let r = rng.random_range(1..=3);
        let (space, h) = hamiltonian(n, d, &mut rng);
        let w = random_weights(r, &mut rng);
        let g = match gamma_min(&spectrum(&h).unwrap(), &w) {
            Err(Error::DegenerateBoundary { .. }) => continue,
            other => other.unwrap(),
        };
        let gamma = space.one_rdm(&g).unwrap();
        check_one_rdm(&gamma, n).unwrap();
        let lam = natural_occupations(&gamma).unwrap();
        let dims = ProblemDims::new(n, d, r).unwrap();
        let system = systems
            .entry((n, d, r))
            .or_insert_with(|| facets_symbolic(&dims).unwrap())
            .clone();
        let m = Polytope::with_system(&dims, &w, system)
            .unwrap()
            .membership(&lam)
            .unwrap();
        assert!(
            m.slacks.iter().all(|&s| s >= -1e-9),
            "N={n} d={d} w={w} λ={lam:?}"
        );
        checked += 1;
    }
}

#[test]
fn non_interacting_minimizers_are_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for (n, d, r) in [(2, 3, 3), (3, 5, 3), (3, 6, 4), (2, 5, 4)] {
        let dims = ProblemDims::new(n, d, r).unwrap();
        let space = FockSpace::new(n, d).unwrap();
        let configs = enumerate_configs(&dims, DEFAULT_CONFIG_CAP).unwrap();
        for _ in 0..50 {
            let mut e: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            e.sort_by(f64::total_cmp);
            let h = OneBodyOperator::diagonal(&e);
            let hm = build_hamiltonian(&h, &TwoBodyInteraction::zero(d), &space).unwrap();
            let w = random_weights(r, &mut rng);
            let g = gamma_min(&spectrum(&hm).unwrap(), &w).unwrap();
            let gamma = space.one_rdm(&g).unwrap();
            let mut order: Vec<_> = configs
                .iter()
                .map(|c| (config_energy(c, &e).unwrap(), c.clone()))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0));
            let seq =
                LowestSequence::new(order[..r].iter().map(|x| x.1.clone()).collect()).unwrap();
            let v = vertex_from_sequence(&seq, &w, d).unwrap();
            for k in 0..d {
                assert!((gamma[(k, k)].re - v[k].to_f64().unwrap()).abs() < 1e-12);
            }
            let mut vs: Vec<f64> = v.iter().map(|x| x.to_f64().unwrap()).collect();
            vs.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in natural_occupations(&gamma).unwrap().iter().zip(&vs) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn two_fermion_spectrum_is_pairwise_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let space = FockSpace::new(2, 3).unwrap();
    for _ in 0..20 {
        let h = OneBodyOperator::new(random_hermitian(3, 1.0, &mut rng)).unwrap();
        let e = spectrum(h.matrix()).unwrap().energies;
        let mut pairs = vec![e[0] + e[1], e[0] + e[2], e[1] + e[2]];
        pairs.sort_by(f64::total_cmp);
        let hm = build_hamiltonian(&h, &TwoBodyInteraction::zero(3), &space).unwrap();
        for (a, b) in spectrum(&hm).unwrap().energies.iter().zip(&pairs) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn single_particle_hamiltonian_is_h() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let h = OneBodyOperator::new(random_hermitian(4, 1.0, &mut rng)).unwrap();
    let hm = build_hamiltonian(
        &h,
        &TwoBodyInteraction::zero(4),
        &FockSpace::new(1, 4).unwrap(),
    )
    .unwrap();
    assert!((hm - h.matrix()).norm() < 1e-15);
}

#[test]
fn eigenpairs_are_accurate() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for (n, d) in [(2, 5), (3, 6)] {
        let (_, h) = hamiltonian(n, d, &mut rng);
        let s = spectrum(&h).unwrap();
        let dim = h.nrows();
        let hn = h.norm();
        for j in 0..dim {
            let v = s.vectors.column(j);
            assert!((&h * v - v * Complex64::new(s.energies[j], 0.0)).norm() <= 1e-9 * hn);
        }
        assert!((s.vectors.adjoint() * &s.vectors - CMatrix::identity(dim, dim)).norm() < 1e-10);
        assert!((h.trace().re - s.energies.iter().sum::<f64>()).abs() < 1e-9);
    }
}

#[test]
fn ground_state_projector_for_pure_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let (_, h) = hamiltonian(2, 4, &mut rng);
    let s = spectrum(&h).unwrap();
    let g = gamma_min(&s, &WeightVector::uniform(1)).unwrap();
    assert!((&g * &g - &g).norm() < 1e-12);
    assert!((energy(&h, &g) - s.energies[0]).abs() < 1e-12);
}
