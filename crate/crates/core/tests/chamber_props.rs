use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_polytope::chambers::{chamber, chamber_feasible, enumerate_sequences, LowestSequence};
use spectral_polytope::fock::{config_energy, enumerate_configs, DEFAULT_CONFIG_CAP};
use spectral_polytope::{Configuration, ProblemDims};

fn cfg(v: &[usize]) -> Configuration {
    Configuration::new(v.to_vec()).unwrap()
}

#[test]
fn third_level_examples() {
    let dims = ProblemDims::new(3, 5, 3).unwrap();
    for third in [[1, 2, 5], [1, 3, 4]] {
        let seq = LowestSequence::new(vec![cfg(&[1, 2, 3]), cfg(&[1, 2, 4]), cfg(&third)]).unwrap();
        assert!(chamber_feasible(&seq, &dims).unwrap().0);
        assert!(chamber(&seq, &dims).unwrap().is_realizable());
    }
    let dims2 = dims.with_r(2).unwrap();
    let skip = LowestSequence::new(vec![cfg(&[1, 2, 3]), cfg(&[1, 3, 4])]).unwrap();
    let (ok, slack) = chamber_feasible(&skip, &dims2).unwrap();
    assert!(!ok);
    assert_eq!(slack, num_rational::BigRational::from_integer(0.into()));
}

#[test]
fn small_r_sequences_are_forced() {
    for (n, d) in [(1, 3), (2, 4), (3, 5), (3, 7)] {
        let one = enumerate_sequences(&ProblemDims::new(n, d, 1).unwrap()).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].seq, vec![Configuration::lowest(n)]);
        if n < d - 1 {
            let two = enumerate_sequences(&ProblemDims::new(n, d, 2).unwrap()).unwrap();
            assert_eq!(two.len(), 1);
            let mut succ: Vec<usize> = (1..n).collect();
            succ.push(n + 1);
            assert_eq!(two[0].seq, vec![Configuration::lowest(n), cfg(&succ)]);
        }
    }
}

#[test]
fn prefixes_of_realizable_sequences_are_realizable() {
    let dims = ProblemDims::new(3, 6, 4).unwrap();
    let full = enumerate_sequences(&dims).unwrap();
    for k in 1..4 {
        let shorter: HashSet<_> = enumerate_sequences(&dims.with_r(k).unwrap())
            .unwrap()
            .into_iter()
            .collect();
        for s in &full {
            let prefix = LowestSequence::new(s.seq[..k].to_vec()).unwrap();
            assert!(shorter.contains(&prefix), "{prefix}");
            assert!(
                chamber_feasible(&prefix, &dims.with_r(k).unwrap())
                    .unwrap()
                    .0
            );
        }
    }
}

#[test]
fn sequence_counts_do_not_depend_on_n_and_d() {
    let cases: [(usize, &[(usize, usize)]); 5] = [
        (1, &[(1, 2), (2, 4), (3, 5)]),
        (2, &[(1, 3), (2, 4), (3, 6)]),
        (3, &[(2, 4), (3, 5), (3, 6)]),
        (4, &[(3, 6), (3, 7), (4, 7)]),
        (5, &[(4, 8), (4, 9), (5, 9)]),
    ];
    for (r, dims) in cases {
        let counts: Vec<usize> = dims
            .iter()
            .map(|&(n, d)| {
                let dims = ProblemDims::new(n, d, r).unwrap();
                assert!(dims.minimal_regime());
                enumerate_sequences(&dims).unwrap().len()
            })
            .collect();
        assert!(counts.windows(2).all(|p| p[0] == p[1]), "r={r}: {counts:?}");
    }
}

#[test]
fn random_energies_land_in_enumerated_chambers() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for (n, d, r) in [(3, 6, 4), (2, 5, 3), (4, 8, 5)] {
        let dims = ProblemDims::new(n, d, r).unwrap();
        let seqs: HashSet<_> = enumerate_sequences(&dims).unwrap().into_iter().collect();
        let configs = enumerate_configs(&dims, DEFAULT_CONFIG_CAP).unwrap();
        for _ in 0..1000 {
            let mut h: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            h.sort_by(f64::total_cmp);
            let mut by_energy: Vec<(f64, &Configuration)> = configs
                .iter()
                .map(|c| (config_energy(c, &h).unwrap(), c))
                .collect();
            by_energy.sort_by(|a, b| a.0.total_cmp(&b.0));
            let observed =
                LowestSequence::new(by_energy[..r].iter().map(|x| x.1.clone()).collect()).unwrap();
            assert!(
                seqs.contains(&observed),
                "{observed} missing for N={n} d={d}"
            );
        }
    }
}
