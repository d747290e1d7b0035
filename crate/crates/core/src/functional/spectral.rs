//! The relaxed ensemble set `{Γ : spec(Γ) ≺ w}` and projections onto it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::manybody::operators::CMatrix;
use crate::manybody::spectrum::{conjugate_diagonal, mix, spectrum};
use crate::weights::WeightVector;

/// Hermitian `D × D` matrices whose spectrum is majorized by `w` padded to
/// length `D`. Such matrices have unit trace and are positive semidefinite.
#[derive(Clone, Debug)]
pub struct SpectralSet {
    w: Vec<f64>,
}

impl SpectralSet {
    pub fn new(w: &WeightVector, dim: usize) -> Result<Self> {
        Ok(Self { w: w.padded(dim)? })
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// Padded weights, descending.
    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Nearest member in Frobenius norm.
    pub fn project(&self, gamma: &CMatrix) -> Result<CMatrix> {
        self.check(gamma)?;
        let mut s = spectrum(gamma)?;
        // descending eigenvalues with matching eigenvectors
        s.energies.reverse();
        let n = s.energies.len();
        let vectors = CMatrix::from_fn(n, n, |r, c| s.vectors[(r, n - 1 - c)]);
        let x = project_permutohedron(&s.energies, &self.w)?;
        Ok(conjugate_diagonal(&vectors, &x))
    }

    /// Nearest matrix with spectrum exactly `w`: the eigenvectors of `Γ`
    /// carry the weights in matching order.
    pub fn project_orbit(&self, gamma: &CMatrix) -> Result<CMatrix> {
        self.check(gamma)?;
        let s = spectrum(gamma)?;
        let n = s.energies.len();
        let descending = CMatrix::from_fn(n, n, |r, c| s.vectors[(r, n - 1 - c)]);
        Ok(conjugate_diagonal(&descending, &self.w))
    }

    /// `min_{Γ ∈ S} Re Tr[A Γ] = Σ_j w_j a_j` with `a` ascending, and a minimizer.
    pub fn linear_minimizer(&self, a: &CMatrix) -> Result<(f64, CMatrix)> {
        self.check(a)?;
        let s = spectrum(a)?;
        let value = self.w.iter().zip(&s.energies).map(|(w, e)| w * e).sum();
        Ok((value, mix(&s.vectors, &self.w)))
    }

    fn check(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.nrows(),
            });
        }
        Ok(())
    }
}

/// Euclidean projection of `z` onto the permutohedron `{x : x ≺ w}`.
///
/// For `z` sorted descending the projection is `z - v`, with `v` the
/// non-increasing isotonic regression of `z - w` (pool adjacent violators).
/// The result keeps the order of `z`. `z` and `w` must have equal length.
pub fn project_permutohedron(z: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: z.len(),
        });
    }
    let n = z.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[b].total_cmp(&z[a]));
    let mut ws = w.to_vec();
    ws.sort_by(|a, b| b.total_cmp(a));
    let y: Vec<f64> = order.iter().zip(&ws).map(|(&i, wi)| z[i] - wi).collect();
    let v = isotonic_nonincreasing(&y);
    let mut out = vec![0.0; n];
    for (k, &i) in order.iter().enumerate() {
        out[i] = z[i] - v[k];
    }
    Ok(out)
}

/// Least-squares non-increasing fit by pool adjacent violators.
pub fn isotonic_nonincreasing(y: &[f64]) -> Vec<f64> {
    // blocks of (sum, count)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(y.len());
    for &v in y {
        blocks.push((v, 1));
        while blocks.len() >= 2 {
            let (s2, c2) = blocks[blocks.len() - 1];
            let (s1, c1) = blocks[blocks.len() - 2];
            if s1 / c1 as f64 >= s2 / c2 as f64 {
                break;
            }
            blocks.pop();
            let last = blocks.len() - 1;
            blocks[last] = (s1 + s2, c1 + c2);
        }
    }
    let mut out = Vec::with_capacity(y.len());
    for (s, c) in blocks {
        out.extend(std::iter::repeat_n(s / c as f64, c));
    }
    out
}

/// `Re Tr[A† B]`.
pub fn frobenius(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Hermitian part `(A + A†) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::majorization::is_majorized;
    use proptest::prelude::*;

    #[test]
    fn two_entry_projection() {
        let x = project_permutohedron(&[1.0, 0.0], &[0.6, 0.4]).unwrap();
        assert!((x[0] - 0.6).abs() < 1e-15 && (x[1] - 0.4).abs() < 1e-15);
        let x = project_permutohedron(&[0.0, 1.0], &[0.6, 0.4]).unwrap();
        assert!((x[0] - 0.4).abs() < 1e-15 && (x[1] - 0.6).abs() < 1e-15);
        let inside = [0.5, 0.3, 0.2];
        assert_eq!(
            project_permutohedron(&inside, &[0.6, 0.4, 0.0]).unwrap(),
            inside.to_vec()
        );
    }

    #[test]
    fn pure_state_projects_onto_w() {
        let w = WeightVector::parse("0.6,0.4").unwrap();
        let set = SpectralSet::new(&w, 3).unwrap();
        let mut g = CMatrix::zeros(3, 3);
        g[(1, 1)] = Complex64::new(1.0, 0.0);
        let p = set.project(&g).unwrap();
        assert!((p[(1, 1)].re - 0.6).abs() < 1e-12);
        let spec = crate::manybody::spectrum::eigenvalues_desc(&p).unwrap();
        // (0.6, 0.2, 0.2) is nearer to (1, 0, 0) than the vertex (0.6, 0.4, 0)
        assert!(
            (spec[0] - 0.6).abs() < 1e-12
                && (spec[1] - 0.2).abs() < 1e-12
                && (spec[2] - 0.2).abs() < 1e-12
        );
        assert!(is_majorized(&spec, &[0.6, 0.4, 0.0]).unwrap());
    }

    fn permutations(v: &[f64]) -> Vec<Vec<f64>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let head = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }

    proptest! {
        // x is the projection iff <z - x, y - x> <= 0 for every vertex y
        #[test]
        fn projection_satisfies_variational_inequality(
            z in proptest::collection::vec(-2.0f64..2.0, 4),
            raw in proptest::collection::vec(0.01f64..1.0, 4),
        ) {
            let s: f64 = raw.iter().sum();
            let mut w: Vec<f64> = raw.iter().map(|x| x / s).collect();
            w.sort_by(|a, b| b.total_cmp(a));
            let x = project_permutohedron(&z, &w).unwrap();
            prop_assert!(is_majorized(&x, &w).unwrap());
            for y in permutations(&w) {
                let ip: f64 = (0..4).map(|i| (z[i] - x[i]) * (y[i] - x[i])).sum();
                prop_assert!(ip <= 1e-12, "{ip}");
            }
        }
    }

    #[test]
    fn isotonic_pools() {
        assert_eq!(
            isotonic_nonincreasing(&[1.0, 3.0, 2.0]),
            vec![2.0, 2.0, 2.0]
        );
        assert_eq!(
            isotonic_nonincreasing(&[3.0, 1.0, 2.0]),
            vec![3.0, 1.5, 1.5]
        );
    }
}
