//! Numerical solvers for the relaxed functional, its fixed-spectrum
//! counterpart and the ensemble energy.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::ProblemDims;
use crate::functional::affine::AffineProjector;
use crate::functional::spectral::{frobenius, hermitian_part, SpectralSet};
use crate::manybody::operators::{
    build_hamiltonian, check_one_rdm, CMatrix, FockSpace, OneBodyOperator, TwoBodyInteraction,
};
use crate::manybody::random::random_unitary;
use crate::manybody::spectrum::{conjugate_diagonal, natural_occupations, spectrum};
use crate::polytope::Polytope;
use crate::weights::WeightVector;

/// Sweep cap for the nonconvex ADMM stage of [`f_w`].
const NONCONVEX_ADMM_CAP: usize = 2000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Target for constraint residuals and relative duality gaps.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Random starts for the fixed-spectrum search.
    pub restarts: usize,
    /// Initial ADMM penalty relative to `max(‖V̂‖, 1)`.
    pub rho: f64,
    /// Projected-gradient step relative to `1 / ‖Ĥ‖`.
    pub step: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-7,
            max_iterations: 50_000,
            seed: 0,
            restarts: 4,
            rho: 1.0,
            step: 10.0,
        }
    }
}

/// Output of [`fbar_w`] and [`f_w`].
#[derive(Clone, Debug)]
pub struct FunctionalValue {
    /// `Tr[V̂ Γ]` at the returned `Γ`.
    pub value: f64,
    /// Certified lower bound (Lagrangian dual); `None` for [`f_w`].
    pub lower_bound: Option<f64>,
    /// `‖Tr_{N-1} Γ - γ‖_F`.
    pub residual: f64,
    pub iterations: usize,
    pub gamma: CMatrix,
}

/// Output of [`ew_via_convex`].
#[derive(Clone, Debug)]
pub struct EnsembleEnergy {
    pub value: f64,
    /// `Tr[Ĥ Γ] - Σ_j w_j E_j`.
    pub gap: f64,
    pub iterations: usize,
    pub gamma: CMatrix,
}

struct Problem {
    projector: AffineProjector,
    set: SpectralSet,
    target: CMatrix,
    cost: CMatrix,
}

impl Problem {
    fn new(gamma: &CMatrix, v: &TwoBodyInteraction, w: &WeightVector, n: usize) -> Result<Self> {
        check_one_rdm(gamma, n)?;
        let d = gamma.nrows();
        if v.d() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.d(),
            });
        }
        let space = FockSpace::new(n, d)?;
        if w.r() > space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: w.r(),
            });
        }
        check_representable(gamma, n, w)?;
        let cost = v.matrix(&space)?;
        let set = SpectralSet::new(w, space.dim())?;
        Ok(Self {
            projector: AffineProjector::new(space)?,
            set,
            target: hermitian_part(gamma),
            cost,
        })
    }

    fn dim(&self) -> usize {
        self.set.dim()
    }

    fn residual(&self, g: &CMatrix) -> Result<f64> {
        self.projector.residual(g, &self.target)
    }

    /// Alternating projections from `start` until the affine residual of the
    /// projected iterate is at most `tol`.
    fn polish(
        &self,
        start: &CMatrix,
        project: impl Fn(&CMatrix) -> Result<CMatrix>,
        tol: f64,
        max_iterations: usize,
    ) -> Result<(CMatrix, f64)> {
        let mut g = start.clone();
        let mut res = self.residual(&g)?;
        let mut k = 0;
        while res > tol && k < max_iterations {
            let a = self.projector.project(&g, &self.target)?;
            g = project(&a)?;
            res = self.residual(&g)?;
            k += 1;
        }
        Ok((g, res))
    }
}

/// Rejects `γ` whose natural occupations lie outside the polytope for `w`.
fn check_representable(gamma: &CMatrix, n: usize, w: &WeightVector) -> Result<()> {
    let d = gamma.nrows();
    let lambda = natural_occupations(gamma)?;
    let dims = ProblemDims::new(n, d, w.r())?;
    let polytope = match Polytope::new(&dims, w) {
        Ok(p) => p,
        // tiny systems without a full-dimensional hull are left to the solver
        Err(Error::DegenerateHull(_)) | Err(Error::Interpolation(_)) => return Ok(()),
        Err(e) => return Err(e),
    };
    let m = polytope.membership(&lambda)?;
    if !m.member {
        return Err(Error::Infeasible(format!(
            "natural occupations violate facets {:?} for w = {w}",
            m.violated
        )));
    }
    Ok(())
}

/// `F̄_w(γ) = min { Tr[V̂ Γ] : Tr_{N-1} Γ = γ, spec(Γ) ≺ w }`.
///
/// Solved by ADMM on the split `Γ ∈ affine set`, `Γ ∈ spectral set`, with
/// residual balancing of the penalty. The returned `Γ` has exact spectral
/// constraint and affine residual at most `opts.tolerance`; `lower_bound`
/// is a Lagrangian dual value built from the final multiplier.
pub fn fbar_w(
    gamma: &CMatrix,
    v: &TwoBodyInteraction,
    w: &WeightVector,
    n: usize,
    opts: &SolverOptions,
) -> Result<FunctionalValue> {
    solve_relaxed(&Problem::new(gamma, v, w, n)?, opts)
}

fn solve_relaxed(p: &Problem, opts: &SolverOptions) -> Result<FunctionalValue> {
    let dim = p.dim();
    // internal targets sit below the reported tolerance so that polishing
    // and rounding stay inside it
    let inner = 0.1 * opts.tolerance;
    let start = CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0);
    let start = p.set.project(&p.projector.project(&start, &p.target)?)?;
    let mut admm = Admm::new(p, start, opts.rho);
    let mut lower = f64::NEG_INFINITY;
    let mut converged = false;
    while admm.iterations < opts.max_iterations {
        let primal = admm.step(p, |m| p.set.project(m))?;
        if admm.iterations % 25 == 0 || primal <= inner {
            lower = lower.max(dual_bound(p, &admm.u, admm.rho)?);
            let upper = frobenius(&p.cost, &admm.x);
            if primal <= inner && upper - lower <= inner * (1.0 + lower.abs()) {
                converged = true;
                break;
            }
        }
    }
    let (g, residual) = p.polish(
        &admm.z,
        |m| p.set.project(m),
        0.1 * inner,
        opts.max_iterations,
    )?;
    let value = frobenius(&p.cost, &g);
    if !converged || residual > opts.tolerance {
        return Err(Error::NoConvergence {
            iterations: admm.iterations,
            residual: residual.max((&admm.x - &admm.z).norm()),
            gap: value - lower,
        });
    }
    Ok(FunctionalValue {
        value,
        lower_bound: Some(lower),
        residual,
        iterations: admm.iterations,
        gamma: g,
    })
}

/// Scaled ADMM for `min Tr[V̂Γ]` over the affine set intersected with a
/// set reached through a projection.
struct Admm {
    x: CMatrix,
    z: CMatrix,
    u: CMatrix,
    rho: f64,
    scale: f64,
    iterations: usize,
}

impl Admm {
    fn new(p: &Problem, start: CMatrix, rho: f64) -> Self {
        let scale = p.cost.norm().max(1.0);
        let dim = p.dim();
        Self {
            x: start.clone(),
            z: start,
            u: CMatrix::zeros(dim, dim),
            rho: rho * scale,
            scale,
            iterations: 0,
        }
    }

    /// One sweep; returns `‖X - Z‖`. Rebalances the penalty every 25 sweeps.
    fn step(&mut self, p: &Problem, project: impl Fn(&CMatrix) -> Result<CMatrix>) -> Result<f64> {
        self.iterations += 1;
        let step = &self.z - &self.u - &p.cost / Complex64::new(self.rho, 0.0);
        self.x = p.projector.project(&step, &p.target)?;
        let z_old = std::mem::replace(&mut self.z, project(&(&self.x + &self.u))?);
        self.u += &self.x - &self.z;
        let primal = (&self.x - &self.z).norm();
        let dual = self.rho * (&self.z - &z_old).norm() / self.scale;
        if self.iterations % 25 == 0 {
            if primal > 10.0 * dual {
                self.rho *= 2.0;
                self.u /= Complex64::new(2.0, 0.0);
            } else if dual > 10.0 * primal {
                self.rho /= 2.0;
                self.u *= Complex64::new(2.0, 0.0);
            }
        }
        Ok(primal)
    }
}

/// `⟨g, γ⟩ + min_{Γ ∈ S} Tr[(V̂ - ĝ) Γ]` with `g` fitted to `V̂ + ρU`.
fn dual_bound(p: &Problem, u: &CMatrix, rho: f64) -> Result<f64> {
    let m = &p.cost + u * Complex64::new(rho, 0.0);
    let g = hermitian_part(&p.projector.multiplier(&hermitian_part(&m))?);
    let reduced = hermitian_part(&(&p.cost - p.projector.lift(&g)?));
    let (inner, _) = p.set.linear_minimizer(&reduced)?;
    Ok(frobenius(&g, &p.target) + inner)
}

/// Heuristic upper bound on `F_w(γ)`, the minimum of `Tr[V̂ Γ]` over
/// `Γ` with spectrum exactly `w` and `Tr_{N-1} Γ = γ`.
///
/// Nonconvex ADMM with the exact-spectrum projection, started from the
/// relaxed minimizer rounded onto the orbit and from `opts.restarts`
/// seeded random orbit points, then augmented-Lagrangian descent along the
/// orbit and alternating projections to feasibility. Every returned value is attained by a `Γ` with spectrum `w`
/// and residual at most `opts.tolerance`, so it bounds `F_w(γ)` from above;
/// it is not certified to be the minimum.
pub fn f_w(
    gamma: &CMatrix,
    v: &TwoBodyInteraction,
    w: &WeightVector,
    n: usize,
    opts: &SolverOptions,
) -> Result<FunctionalValue> {
    let p = Problem::new(gamma, v, w, n)?;
    let inner = 0.1 * opts.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = Vec::with_capacity(opts.restarts + 1);
    if let Ok(relaxed) = solve_relaxed(&p, opts) {
        starts.push(p.set.project_orbit(&relaxed.gamma)?);
    }
    for _ in 0..opts.restarts {
        let u0 = random_unitary(p.dim(), &mut rng);
        starts.push(conjugate_diagonal(&u0, p.set.weights()));
    }
    let mut best: Option<FunctionalValue> = None;
    let mut closest = f64::INFINITY;
    let mut total = 0;
    for start in starts {
        let mut admm = Admm::new(&p, start, opts.rho);
        let mut previous = f64::INFINITY;
        while admm.iterations < opts.max_iterations.min(NONCONVEX_ADMM_CAP) {
            let primal = admm.step(&p, |m| p.set.project_orbit(m))?;
            let value = frobenius(&p.cost, &admm.z);
            if primal <= inner && (value - previous).abs() <= inner * (1.0 + value.abs()) {
                break;
            }
            previous = value;
        }
        total += admm.iterations;
        let (coarse, _) = p.polish(
            &admm.z,
            |m| p.set.project_orbit(m),
            0.1 * inner,
            opts.max_iterations,
        )?;
        let (refined, k) = orbit_descent(&p, coarse.clone(), 100.0, opts)?;
        total += k;
        let (refined, _) = p.polish(
            &refined,
            |m| p.set.project_orbit(m),
            0.1 * inner,
            opts.max_iterations,
        )?;
        for g in [coarse, refined] {
            let residual = p.residual(&g)?;
            closest = closest.min(residual);
            if residual > opts.tolerance {
                continue;
            }
            let value = frobenius(&p.cost, &g);
            if best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(FunctionalValue {
                    value,
                    lower_bound: None,
                    residual,
                    iterations: admm.iterations + k,
                    gamma: g,
                });
            }
        }
    }
    best.ok_or(Error::NoConvergence {
        iterations: total,
        residual: closest,
        gap: f64::NAN,
    })
}

/// Minimizes `Tr[V̂Γ] + ⟨y, L(Γ) - γ⟩ + μ/2 ‖L(Γ) - γ‖²` over `Γ = W Γ0 W†`,
/// updating `y` and `μ` between inner solves.
fn orbit_descent(
    p: &Problem,
    start: CMatrix,
    mu: f64,
    opts: &SolverOptions,
) -> Result<(CMatrix, usize)> {
    let d = p.target.nrows();
    let scale = p.cost.norm().max(1.0);
    let mut g = start;
    let mut y = CMatrix::zeros(d, d);
    let mut mu = mu * scale;
    let mut t = 1.0 / scale;
    let mut iterations = 0;
    let mut residual = p.residual(&g)?;
    let objective = |g: &CMatrix, y: &CMatrix, mu: f64| -> Result<f64> {
        let defect = p.projector.reduce(g)? - &p.target;
        Ok(frobenius(&p.cost, g) + frobenius(y, &defect) + 0.5 * mu * defect.norm_squared())
    };
    for _outer in 0..60 {
        let inner_tol = (opts.tolerance * scale).max(1e-3 * residual.min(1.0) * scale);
        let mut f = objective(&g, &y, mu)?;
        for _ in 0..2000 {
            if iterations >= opts.max_iterations {
                break;
            }
            iterations += 1;
            let defect = p.projector.reduce(&g)? - &p.target;
            let grad = &p.cost
                + p.projector
                    .lift(&hermitian_part(&(&y + defect * Complex64::new(mu, 0.0))))?;
            // Ω = [Γ, G] is anti-Hermitian; Γ(t) = e^{tΩ} Γ e^{-tΩ} descends
            let omega = &g * &grad - &grad * &g;
            let slope = omega.norm_squared();
            if slope.sqrt() <= inner_tol {
                break;
            }
            let k = &omega * Complex64::new(0.0, 1.0);
            let ks = spectrum(&hermitian_part(&k))?;
            let mut accepted = false;
            for _ in 0..40 {
                let phases: Vec<Complex64> = ks
                    .energies
                    .iter()
                    .map(|&e| Complex64::new(0.0, -t * e).exp())
                    .collect();
                let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
                let rot = &ks.vectors * diag * ks.vectors.adjoint();
                let cand = hermitian_part(&(&rot * &g * rot.adjoint()));
                let fc = objective(&cand, &y, mu)?;
                if fc <= f - 1e-4 * t * slope {
                    g = cand;
                    f = fc;
                    accepted = true;
                    t *= 2.0;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let defect = p.projector.reduce(&g)? - &p.target;
        let new_residual = defect.norm();
        if new_residual <= opts.tolerance || iterations >= opts.max_iterations {
            break;
        }
        y += hermitian_part(&defect) * Complex64::new(mu, 0.0);
        if new_residual > 0.25 * residual {
            mu *= 5.0;
        }
        residual = new_residual;
        t = t.min(1.0 / mu);
    }
    Ok((g, iterations))
}

/// `E_w = min_{spec(Γ) ≺ w} Tr[Ĥ Γ]` by projected gradient from `1/D`,
/// stopped once `Tr[ĤΓ] - Σ_j w_j E_j <= tolerance (1 + |E_w|)`.
pub fn ew_via_convex(
    h: &OneBodyOperator,
    v: &TwoBodyInteraction,
    w: &WeightVector,
    n: usize,
    opts: &SolverOptions,
) -> Result<EnsembleEnergy> {
    let space = FockSpace::new(n, h.d())?;
    let ham = build_hamiltonian(h, v, &space)?;
    let dim = space.dim();
    if w.r() > dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: w.r(),
        });
    }
    let set = SpectralSet::new(w, dim)?;
    let (bound, _) = set.linear_minimizer(&ham)?;
    let t = opts.step / ham.norm().max(f64::MIN_POSITIVE);
    let mut g = CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0);
    let mut iterations = 0;
    loop {
        let value = frobenius(&ham, &g);
        let gap = value - bound;
        if gap <= opts.tolerance * (1.0 + bound.abs()) {
            return Ok(EnsembleEnergy {
                value,
                gap,
                iterations,
                gamma: g,
            });
        }
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                residual: 0.0,
                gap,
            });
        }
        iterations += 1;
        g = set.project(&(&g - &ham * Complex64::new(t, 0.0)))?;
    }
}

/// `min_γ Tr[hγ] + F̄_w(γ)` evaluated at the one-particle matrix of the
/// convex minimizer; equals `E_w` up to solver tolerances.
pub fn ew_two_step(
    h: &OneBodyOperator,
    v: &TwoBodyInteraction,
    w: &WeightVector,
    n: usize,
    opts: &SolverOptions,
) -> Result<f64> {
    let convex = ew_via_convex(h, v, w, n, opts)?;
    let space = FockSpace::new(n, h.d())?;
    let gamma = hermitian_part(&space.one_rdm(&convex.gamma)?);
    let kinetic = frobenius(&h.matrix().adjoint(), &gamma);
    Ok(kinetic + fbar_w(&gamma, v, w, n, opts)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::random::{random_interaction, random_one_body, random_weights};
    use crate::manybody::spectrum::{ew_exact, spectrum};

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn convex_route_matches_diagonalization() {
        let mut r = rng(21);
        for (n, d, k) in [(1, 3, 2), (2, 4, 3), (3, 5, 4)] {
            let h = random_one_body(d, 1.0, &mut r);
            let v = random_interaction(d, 0.5, &mut r);
            let w = random_weights(k, &mut r);
            let e = ew_via_convex(&h, &v, &w, n, &SolverOptions::default()).unwrap();
            let space = FockSpace::new(n, d).unwrap();
            let exact = ew_exact(
                &spectrum(&build_hamiltonian(&h, &v, &space).unwrap()).unwrap(),
                &w,
            )
            .unwrap();
            assert!((e.value - exact).abs() <= 1e-6 * (1.0 + exact.abs()));
            assert!(e.gap <= 1e-7 * (1.0 + exact.abs()));
        }
    }

    #[test]
    fn particle_hole_case_is_determined_by_gamma() {
        // N = 2, d = 3: the reduction is a bijection, so both functionals
        // equal the energy of the unique preimage
        let mut r = rng(4);
        let space = FockSpace::new(2, 3).unwrap();
        let w = WeightVector::parse("0.6,0.3,0.1").unwrap();
        let u = random_unitary(3, &mut r);
        let g0 = conjugate_diagonal(&u, w.as_f64());
        let gamma = space.one_rdm(&g0).unwrap();
        let v = random_interaction(3, 1.0, &mut r);
        let expected = frobenius(&v.matrix(&space).unwrap(), &g0);
        let opts = SolverOptions::default();
        let fb = fbar_w(&gamma, &v, &w, 2, &opts).unwrap();
        assert!((fb.value - expected).abs() < 1e-7);
        assert!(fb.lower_bound.unwrap() <= fb.value + 1e-12);
        let f = f_w(&gamma, &v, &w, 2, &opts).unwrap();
        assert!((f.value - expected).abs() < 1e-7);
    }

    #[test]
    fn relaxed_value_is_bracketed() {
        let mut r = rng(8);
        let space = FockSpace::new(2, 4).unwrap();
        let w = WeightVector::parse("0.5,0.3,0.2").unwrap();
        let u = random_unitary(6, &mut r);
        let g0 = conjugate_diagonal(&u, &w.padded(6).unwrap());
        let gamma = space.one_rdm(&g0).unwrap();
        let v = random_interaction(4, 1.0, &mut r);
        let opts = SolverOptions::default();
        let fb = fbar_w(&gamma, &v, &w, 2, &opts).unwrap();
        assert!(fb.residual <= opts.tolerance);
        let lb = fb.lower_bound.unwrap();
        assert!(lb <= fb.value + 1e-9 && fb.value - lb <= 1e-6);
        assert!(fb.value <= frobenius(&v.matrix(&space).unwrap(), &g0) + 1e-7);
        let f = f_w(&gamma, &v, &w, 2, &opts).unwrap();
        assert!(fb.value <= f.value + 1e-6);
        let spec = crate::manybody::spectrum::eigenvalues_desc(&f.gamma).unwrap();
        for (a, b) in spec.iter().zip(w.padded(6).unwrap()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn outside_the_polytope_is_infeasible() {
        let gamma =
            CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(1.0), c(0.0)]));
        let w = WeightVector::parse("0.7,0.3").unwrap();
        let v = TwoBodyInteraction::zero(3);
        assert!(matches!(
            fbar_w(&gamma, &v, &w, 2, &SolverOptions::default()),
            Err(Error::Infeasible(_))
        ));
    }
}
