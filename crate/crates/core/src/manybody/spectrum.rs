//! Exact diagonalization, ensemble minimizers and natural occupations.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::manybody::operators::{hermitian_deviation, CMatrix};
use crate::weights::WeightVector;

/// Gap required between `E_r` and `E_{r+1}` for a unique ensemble minimizer.
pub const BOUNDARY_GAP: f64 = 1e-9;

/// Tolerance on `|H - H†|` relative to the largest entry.
pub const SPECTRUM_HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub vectors: CMatrix,
}

/// Hermitian eigendecomposition, sorted ascending.
pub fn spectrum(h: &CMatrix) -> Result<Spectrum> {
    if h.nrows() != h.ncols() {
        return Err(Error::InvalidOperator(format!(
            "matrix is {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let scale = 1.0 + h.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let dev = hermitian_deviation(h);
    if dev > SPECTRUM_HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(dev));
    }
    if h.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::InvalidOperator(
            "matrix has non-finite entries".into(),
        ));
    }
    let hs = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(hs);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(h.nrows(), h.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Spectrum { energies, vectors })
}

/// Eigenvalues sorted descending.
pub fn eigenvalues_desc(a: &CMatrix) -> Result<Vec<f64>> {
    let mut e = spectrum(a)?.energies;
    e.reverse();
    Ok(e)
}

/// `Γ = Σ_{j<=r} w_j |Ψ_j⟩⟨Ψ_j|`.
///
/// Fails with [`Error::DegenerateBoundary`] if `E_r` and `E_{r+1}` are
/// closer than [`BOUNDARY_GAP`], where the minimizer is not unique.
pub fn gamma_min(spec: &Spectrum, w: &WeightVector) -> Result<CMatrix> {
    let dim = spec.energies.len();
    let r = w.r();
    if r > dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: r,
        });
    }
    if r < dim && spec.energies[r - 1] >= spec.energies[r] - BOUNDARY_GAP {
        return Err(Error::DegenerateBoundary {
            r,
            e_r: spec.energies[r - 1],
            e_next: spec.energies[r],
        });
    }
    Ok(mix(&spec.vectors, w.as_f64()))
}

/// `Σ_j w_j v_j v_j†` over the first `w.len()` columns of `vectors`.
pub fn mix(vectors: &CMatrix, w: &[f64]) -> CMatrix {
    let dim = vectors.nrows();
    let cols = vectors.columns(0, w.len());
    let scaled = CMatrix::from_fn(dim, w.len(), |i, j| cols[(i, j)] * w[j]);
    scaled * cols.adjoint()
}

/// `E_w = Σ_j w_j E_j`.
pub fn ew_exact(spec: &Spectrum, w: &WeightVector) -> Result<f64> {
    if w.r() > spec.energies.len() {
        return Err(Error::DimensionMismatch {
            expected: spec.energies.len(),
            found: w.r(),
        });
    }
    Ok(w.as_f64()
        .iter()
        .zip(&spec.energies)
        .map(|(a, b)| a * b)
        .sum())
}

/// Natural occupation numbers, sorted descending.
pub fn natural_occupations(gamma: &CMatrix) -> Result<Vec<f64>> {
    eigenvalues_desc(gamma)
}

/// `U diag(x) U†`.
pub fn conjugate_diagonal(u: &CMatrix, x: &[f64]) -> CMatrix {
    let diag = CMatrix::from_diagonal(&DVector::from_iterator(
        x.len(),
        x.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    u * diag * u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::operators::{
        build_hamiltonian, FockSpace, OneBodyOperator, TwoBodyInteraction,
    };

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn small_spectra() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0);
        m[(1, 0)] = c(1.0);
        let s = spectrum(&m).unwrap();
        assert!((s.energies[0] + 1.0).abs() < 1e-14 && (s.energies[1] - 1.0).abs() < 1e-14);
        let d = CMatrix::from_diagonal(&DVector::from_vec(vec![c(3.0), c(1.0), c(2.0)]));
        assert_eq!(spectrum(&d).unwrap().energies, vec![1.0, 2.0, 3.0]);
        m[(0, 1)] = c(2.0);
        assert!(matches!(spectrum(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn supplemental_minimizers() {
        let sp = FockSpace::new(2, 3).unwrap();
        let h = OneBodyOperator::diagonal(&[0.0, 1.0, 2.0]);
        let hm = build_hamiltonian(&h, &TwoBodyInteraction::zero(3), &sp).unwrap();
        let s = spectrum(&hm).unwrap();
        let cases = [
            ("1,0,0", [1.0, 1.0, 0.0]),
            ("0.7,0.3,0", [1.0, 0.7, 0.3]),
            ("0.5,0.3,0.2", [0.8, 0.7, 0.5]),
        ];
        for (w, expected) in cases {
            let w = WeightVector::parse(w).unwrap();
            let g = gamma_min(&s, &w).unwrap();
            let lam = natural_occupations(&sp.one_rdm(&g).unwrap()).unwrap();
            for (a, b) in lam.iter().zip(expected) {
                assert!((a - b).abs() < 1e-12, "{lam:?}");
            }
        }
        let w = WeightVector::parse("0.7,0.3").unwrap();
        assert!((ew_exact(&s, &w).unwrap() - 1.3).abs() < 1e-14);
    }

    #[test]
    fn degenerate_boundary() {
        let sp = FockSpace::new(2, 4).unwrap();
        // E(1,4) = E(2,3) = 3 are the 3rd and 4th levels
        let h = OneBodyOperator::diagonal(&[0.0, 1.0, 2.0, 3.0]);
        let hm = build_hamiltonian(&h, &TwoBodyInteraction::zero(4), &sp).unwrap();
        let s = spectrum(&hm).unwrap();
        let w = WeightVector::parse("0.5,0.3,0.2").unwrap();
        assert!(matches!(
            gamma_min(&s, &w),
            Err(Error::DegenerateBoundary { .. })
        ));
        let uniform = WeightVector::uniform(6);
        let g = gamma_min(&s, &uniform).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == j { 1.0 / 6.0 } else { 0.0 };
                assert!((g[(i, j)] - c(expected)).norm() < 1e-14);
            }
        }
        assert!((ew_exact(&s, &uniform).unwrap() - hm.trace().re / 6.0).abs() < 1e-13);
    }
}
