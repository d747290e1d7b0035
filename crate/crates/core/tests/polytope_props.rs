use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_polytope::chambers::enumerate_sequences;
use spectral_polytope::dd::hull_facets;
use spectral_polytope::manybody::random::{random_majorized, random_permutation, random_weights};
use spectral_polytope::polytope::facets::{
    facets_numeric, facets_symbolic, generic_weights, FacetSystem, NumericFacet,
};
use spectral_polytope::polytope::majorization::{is_majorized, is_majorized_exact};
use spectral_polytope::polytope::{vertex_from_sequence, Polytope};
use spectral_polytope::{ProblemDims, WeightVector};

fn dims(n: usize, d: usize, r: usize) -> ProblemDims {
    ProblemDims::new(n, d, r).unwrap()
}

/// Full-dimensional dims used per `r` for property checks.
fn test_dims(r: usize) -> ProblemDims {
    let n = (r.max(2) - 1).max(2);
    dims(n, n + r.max(2) - 1, r)
}

fn to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap()).collect()
}

/// Sorted-coordinate form of a facet `a·λ <= b` of a permutation-invariant
/// polytope in `Σλ = n`: sort `a` descending, shift so the last entry is 0,
/// divide by the gcd.
fn canonical(a: &[BigInt], b: &BigRational, n: usize) -> NumericFacet {
    let mut c: Vec<BigInt> = a.to_vec();
    c.sort_by(|x, y| y.cmp(x));
    let m = c.last().unwrap().clone();
    let c: Vec<BigInt> = c.iter().map(|x| x - &m).collect();
    let rhs = b - BigRational::from_integer(m * BigInt::from(n));
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    NumericFacet {
        c: c.iter().map(|x| (x / &g).to_i64().unwrap()).collect(),
        rhs: rhs / BigRational::from_integer(g),
    }
}

#[test]
fn facets_match_full_orbit_hull() {
    for (n, d, r) in [(2, 3, 1), (2, 4, 2), (2, 4, 3), (3, 5, 3), (3, 6, 4)] {
        let dims = dims(n, d, r);
        let w = generic_weights(r, 5);
        let p = Polytope::new(&dims, &w).unwrap();
        // independent oracle: hull of the whole orbit in the chart that
        // drops the last coordinate
        let chart: Vec<Vec<BigRational>> = p
            .vertex_orbit()
            .unwrap()
            .into_iter()
            .map(|mut v| {
                v.pop();
                v
            })
            .collect();
        let oracle: BTreeSet<NumericFacet> = hull_facets(&chart)
            .unwrap()
            .into_iter()
            .map(|(mut a, b)| {
                a.push(BigInt::zero());
                canonical(&a, &b, n)
            })
            .collect();
        let ours: BTreeSet<NumericFacet> = facets_numeric(&dims, &w).unwrap().into_iter().collect();
        assert_eq!(ours, oracle, "N={n} d={d} r={r}");
        let symbolic: BTreeSet<NumericFacet> = p.facets().iter().cloned().collect();
        assert_eq!(symbolic, oracle, "N={n} d={d} r={r}");
    }
}

#[test]
fn every_sequence_vertex_satisfies_every_facet() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for r in 1..=5 {
        let dims = test_dims(r);
        let system = facets_symbolic(&dims).unwrap();
        let seqs = enumerate_sequences(&dims).unwrap();
        for _ in 0..20 {
            let w = random_weights(r, &mut rng);
            let p = Polytope::with_system(&dims, &w, system.clone()).unwrap();
            for s in &seqs {
                let v = vertex_from_sequence(s, &w, dims.d).unwrap();
                assert!(p.contains_exact(&v).unwrap(), "r={r} w={w} {s}");
            }
            for v in p.vertices().unwrap() {
                let m = p.membership(&to_f64(&v)).unwrap();
                assert!(m.member && !m.tight.is_empty(), "r={r} w={w}");
            }
        }
    }
}

fn systems() -> &'static BTreeMap<usize, FacetSystem> {
    static CELL: OnceLock<BTreeMap<usize, FacetSystem>> = OnceLock::new();
    CELL.get_or_init(|| {
        (1..=4)
            .map(|r| (r, facets_symbolic(&dims(3, 6, r)).unwrap()))
            .collect()
    })
}

fn polytope(w: &WeightVector) -> Polytope {
    let dims = dims(3, 6, 4);
    Polytope::with_system(&dims, w, systems()[&w.r()].clone()).unwrap()
}

/// Random convex combination of `k` orbit points.
fn sample_member(p: &Polytope, k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let gens: Vec<Vec<f64>> = p.vertices().unwrap().iter().map(|v| to_f64(v)).collect();
    let d = gens[0].len();
    let mut out = vec![0.0; d];
    let t: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = t.iter().sum();
    for ti in t {
        let g = &gens[rng.random_range(0..gens.len())];
        let perm = random_permutation(d, rng);
        for i in 0..d {
            out[i] += ti / s * g[perm[i]];
        }
    }
    out
}

#[test]
fn polytopes_grow_along_majorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let w = random_weights(3, &mut rng);
        let mut wp = random_majorized(w.as_f64(), 4, 3, &mut rng);
        wp.sort_by(|a, b| b.total_cmp(a));
        let wp = WeightVector::from_f64(&wp).unwrap();
        let small = polytope(&wp);
        let big = polytope(&w);
        for _ in 0..5 {
            let lam = sample_member(&small, 4, &mut rng);
            assert!(small.membership(&lam).unwrap().member);
            let m = big.membership(&lam).unwrap();
            assert!(m.member, "w'={wp} w={w} λ={lam:?} slacks={:?}", m.slacks);
        }
    }
}

#[test]
fn members_obey_pauli_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for r in 1..=4 {
        for _ in 0..10 {
            let w = random_weights(r, &mut rng);
            let p = polytope(&w);
            for _ in 0..50 {
                let lam = sample_member(&p, 3, &mut rng);
                assert!(lam.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
                // arbitrary normalized points: membership implies the bounds
                let mut x: Vec<f64> = (0..6).map(|_| rng.random_range(-0.2..1.2)).collect();
                let s: f64 = x.iter().sum();
                x.iter_mut().for_each(|v| *v *= 3.0 / s);
                if p.membership(&x).unwrap().member {
                    assert!(
                        x.iter().all(|&v| (-1e-9..=1.0 + 1e-9).contains(&v)),
                        "{x:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn lift_predicts_larger_systems() {
    for r in 2..=5 {
        let base = ProblemDims::new((r - 1).max(2), 2 * r - 2 + usize::from(r == 2), r).unwrap();
        let mut sys = facets_symbolic(&base).unwrap();
        for _ in 0..2 {
            sys = sys.lift().unwrap();
            let direct = facets_symbolic(&sys.dims).unwrap();
            assert_eq!(sys, direct, "r={r} at {}", sys.dims);
        }
    }
}

fn vec_pair(len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    let unit = move || {
        proptest::collection::vec(0.01f64..1.0, len).prop_map(|a| {
            let s: f64 = a.iter().sum();
            a.iter().map(|x| x / s).collect::<Vec<f64>>()
        })
    };
    (unit(), unit())
}

fn exact(v: &[f64]) -> Vec<BigRational> {
    v.iter()
        .map(|&x| BigRational::from_float(x).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn membership_is_permutation_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = generic_weights(3, 1);
        let p = polytope(&w);
        let mut lam: Vec<f64> = (0..6).map(|_| rng.random::<f64>()).collect();
        let s: f64 = lam.iter().sum();
        lam.iter_mut().for_each(|v| *v *= 3.0 / s);
        let perm = random_permutation(6, &mut rng);
        let permuted: Vec<f64> = perm.iter().map(|&i| lam[i]).collect();
        prop_assert_eq!(p.membership(&lam).unwrap().member, p.membership(&permuted).unwrap().member);
    }

    #[test]
    fn majorization_axioms((x, y) in vec_pair(5), z in proptest::collection::vec(0.0f64..1.0, 5)) {
        prop_assert!(is_majorized(&x, &x).unwrap());
        // floating and exact tests agree on exactly renormalized copies
        let (ex, ey) = (exact(&x), exact(&y));
        let sy: BigRational = ey.iter().sum();
        let sx: BigRational = ex.iter().sum();
        let ex: Vec<BigRational> = ex.iter().map(|v| v * &sy / &sx).collect();
        let xy = is_majorized_exact(&ex, &ey).unwrap();
        let yx = is_majorized_exact(&ey, &ex).unwrap();
        if xy && yx {
            let (mut a, mut b) = (ex.clone(), ey.clone());
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
        // the uniform vector is below everything, and everything is below a point mass
        let n = x.len() as f64;
        prop_assert!(is_majorized(&vec![1.0 / n; 5], &x).unwrap());
        prop_assert!(is_majorized(&x, &[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap());
        // transitivity through a doubly stochastic average of y
        let mut rng = ChaCha8Rng::seed_from_u64(z.iter().map(|v| v.to_bits()).fold(0, u64::wrapping_add));
        let avg = random_majorized(&y, 5, 3, &mut rng);
        let avg2 = random_majorized(&avg, 5, 3, &mut rng);
        prop_assert!(is_majorized(&avg, &y).unwrap());
        prop_assert!(is_majorized(&avg2, &avg).unwrap());
        prop_assert!(is_majorized(&avg2, &y).unwrap());
    }
}
