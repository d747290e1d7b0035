//! Seeded random instances: Hamiltonians, interactions, weights, unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::manybody::operators::{CMatrix, OneBodyOperator, TwoBodyInteraction};
use crate::weights::WeightVector;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Real symmetric Gaussian matrix (GOE-like), scaled by `scale`.
pub fn random_one_body<R: Rng + ?Sized>(d: usize, scale: f64, rng: &mut R) -> OneBodyOperator {
    let x = DMatrix::from_fn(d, d, |_, _| normal(rng));
    let h = (&x + x.transpose()) * (0.5 * scale);
    OneBodyOperator::new(h.map(|v| Complex64::new(v, 0.0))).expect("symmetric by construction")
}

/// Complex Hermitian Gaussian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> CMatrix {
    let x = CMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    (&x + x.adjoint()) * Complex64::new(0.5 * scale, 0.0)
}

/// Gaussian coefficients made Hermitian (`V_pqrs = conj V_rspq`) and then
/// antisymmetrized in both index pairs.
pub fn random_interaction<R: Rng + ?Sized>(
    d: usize,
    scale: f64,
    rng: &mut R,
) -> TwoBodyInteraction {
    let n = d.pow(4);
    let idx = |p: usize, q: usize, r: usize, s: usize| ((p * d + q) * d + r) * d + s;
    let x: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
    let mut y = vec![Complex64::ZERO; n];
    for p in 0..d {
        for q in 0..d {
            for r in 0..d {
                for s in 0..d {
                    y[idx(p, q, r, s)] = (x[idx(p, q, r, s)] + x[idx(r, s, p, q)].conj()) * 0.5;
                }
            }
        }
    }
    let mut v = vec![Complex64::ZERO; n];
    for p in 0..d {
        for q in 0..d {
            for r in 0..d {
                for s in 0..d {
                    v[idx(p, q, r, s)] =
                        (y[idx(p, q, r, s)] - y[idx(q, p, r, s)] - y[idx(p, q, s, r)]
                            + y[idx(q, p, s, r)])
                            * (0.25 * scale);
                }
            }
        }
    }
    TwoBodyInteraction::from_dense(d, v).expect("symmetric by construction")
}

/// Flat Dirichlet draw of `r` weights, sorted descending.
pub fn random_weights<R: Rng + ?Sized>(r: usize, rng: &mut R) -> WeightVector {
    loop {
        let mut x: Vec<f64> = (0..r).map(|_| Exp1.sample(rng)).collect();
        let s: f64 = x.iter().sum();
        for v in x.iter_mut() {
            *v /= s;
        }
        x.sort_by(|a, b| b.total_cmp(a));
        if x.last().is_some_and(|&v| v > 0.0) {
            if let Ok(w) = WeightVector::from_f64(&x) {
                if w.r() == r {
                    return w;
                }
            }
        }
    }
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// A random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// A vector majorized by `w` (padded to `n`): the average of `k` random
/// permutations of `w`, combined with random convex weights.
pub fn random_majorized<R: Rng + ?Sized>(w: &[f64], n: usize, k: usize, rng: &mut R) -> Vec<f64> {
    let mut padded = w.to_vec();
    padded.resize(n, 0.0);
    let mix: Vec<f64> = {
        let x: Vec<f64> = (0..k.max(1)).map(|_| Exp1.sample(rng)).collect();
        let s: f64 = x.iter().sum();
        x.into_iter().map(|v: f64| v / s).collect()
    };
    let mut out = vec![0.0; n];
    for t in mix {
        let p = random_permutation(n, rng);
        for i in 0..n {
            out[i] += t * padded[p[i]];
        }
    }
    out
}
