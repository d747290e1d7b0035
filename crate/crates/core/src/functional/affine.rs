//! Projection onto the affine set `{Γ : Tr_{N-1} Γ = γ}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functional::spectral::hermitian_part;
use crate::manybody::operators::{CMatrix, FockSpace};

/// Projector onto `{Γ Hermitian : L(Γ) = γ}` with `L` the one-particle
/// reduction. `Tr Γ = 1` follows from `Tr γ = N`.
///
/// `L L*` is equivariant under orbital rotations, so on Hermitian `d × d`
/// matrices it acts as `g ↦ α g + β Tr(g) 1`. Both constants are measured
/// once from `L` itself, which makes the pseudoinverse closed-form.
#[derive(Clone, Debug)]
pub struct AffineProjector {
    space: FockSpace,
    alpha: f64,
    beta: f64,
}

impl AffineProjector {
    pub fn new(space: FockSpace) -> Result<Self> {
        let d = space.d();
        if d < 2 || space.n() == 0 || space.n() >= d {
            return Err(Error::InvalidDims(format!(
                "one-particle reduction needs 0 < N < d, got N={}, d={d}",
                space.n()
            )));
        }
        let mut e = CMatrix::zeros(d, d);
        e[(0, 0)] = Complex64::new(1.0, 0.0);
        let image = space.one_rdm(&space.one_body_lift(&e)?)?;
        let beta = image[(1, 1)].re;
        let alpha = image[(0, 0)].re - beta;
        Ok(Self { space, alpha, beta })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    /// `L(Γ)`.
    pub fn reduce(&self, gamma: &CMatrix) -> Result<CMatrix> {
        self.space.one_rdm(gamma)
    }

    /// `L*(g) = ĝ`.
    pub fn lift(&self, g: &CMatrix) -> Result<CMatrix> {
        self.space.one_body_lift(g)
    }

    /// `(L L*)^{-1} y`.
    pub fn solve_normal(&self, y: &CMatrix) -> CMatrix {
        let d = self.space.d() as f64;
        let shift = y.trace() * (self.beta / (self.alpha + d * self.beta));
        let mut out = y.clone();
        for i in 0..y.nrows() {
            out[(i, i)] -= shift;
        }
        out / Complex64::new(self.alpha, 0.0)
    }

    /// Nearest `Γ'` with `L(Γ') = target`.
    pub fn project(&self, gamma: &CMatrix, target: &CMatrix) -> Result<CMatrix> {
        let defect = self.reduce(gamma)? - target;
        Ok(hermitian_part(
            &(gamma - self.lift(&self.solve_normal(&defect))?),
        ))
    }

    /// `‖L(Γ) - target‖_F`.
    pub fn residual(&self, gamma: &CMatrix, target: &CMatrix) -> Result<f64> {
        Ok((self.reduce(gamma)? - target).norm())
    }

    /// Least-squares `g` with `L*(g) ≈ M`.
    pub fn multiplier(&self, m: &CMatrix) -> Result<CMatrix> {
        Ok(self.solve_normal(&self.reduce(m)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normal_operator_is_inverted() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, d) in [(1, 3), (2, 4), (2, 5), (3, 5)] {
            let p = AffineProjector::new(FockSpace::new(n, d).unwrap()).unwrap();
            let y = random_hermitian(d, 1.0, &mut rng);
            let g = p.solve_normal(&y);
            let back = p.reduce(&p.lift(&g).unwrap()).unwrap();
            assert!((back - &y).norm() < 1e-12, "N={n} d={d}");
        }
    }

    #[test]
    fn projection_is_idempotent_and_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = AffineProjector::new(FockSpace::new(2, 4).unwrap()).unwrap();
        let target = p
            .reduce(&(CMatrix::identity(6, 6) / Complex64::new(6.0, 0.0)))
            .unwrap();
        let x = random_hermitian(6, 1.0, &mut rng);
        let y = p.project(&x, &target).unwrap();
        assert!(p.residual(&y, &target).unwrap() < 1e-12);
        assert!((p.project(&y, &target).unwrap() - &y).norm() < 1e-12);
        assert!(((y.trace().re) - 1.0).abs() < 1e-12);
        // x - y is orthogonal to directions inside the affine set
        let z = p
            .project(&random_hermitian(6, 1.0, &mut rng), &target)
            .unwrap();
        let inner = super::super::spectral::frobenius(&(x - &y), &(z - &y));
        assert!(inner.abs() < 1e-10);
    }
}
