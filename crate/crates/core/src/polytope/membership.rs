//! Membership of occupation vectors in the spectral polytope.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::ProblemDims;
use crate::lp::{solve, Constraint, LinearProgram, LpOutcome, Relation};
use crate::polytope::facets::{
    effective_dims, facets_symbolic_from_generators, FacetSystem, NumericFacet,
};
use crate::polytope::vertices::{
    generating_vertices, permutation_orbit, sorted_generator_points, SymbolicVertex,
};
use crate::weights::WeightVector;

/// Tolerance for the normalization `Σλ = N` and for facet slacks.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Largest `d` for which the exact orbit LP is offered.
pub const EXACT_LP_MAX_D: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// `rhs - c·λ↓` per facet, in the order of [`Polytope::facets`].
    pub slacks: Vec<f64>,
    /// Facets with slack below `-MEMBERSHIP_TOL`.
    pub violated: Vec<usize>,
    /// Facets with `|slack| <= MEMBERSHIP_TOL`.
    pub tight: Vec<usize>,
}

/// The polytope at fixed `(N, d)` and weights `w`.
#[derive(Clone, Debug)]
pub struct Polytope {
    dims: ProblemDims,
    w: WeightVector,
    generators: Vec<SymbolicVertex>,
    system: FacetSystem,
    facets: Vec<NumericFacet>,
}

impl Polytope {
    /// Builds generators and the symbolic facet system for `r = w.r()`,
    /// instantiated at `w`. `dims.r` must be at least the number of
    /// positive weights.
    pub fn new(dims: &ProblemDims, w: &WeightVector) -> Result<Self> {
        let eff = effective_dims(dims, w)?;
        let generators = generating_vertices(&eff)?;
        let system = facets_symbolic_from_generators(&generators, &eff)?;
        Ok(Self::from_parts(eff, w.clone(), generators, system))
    }

    /// Uses a precomputed facet system (for example from a cache).
    pub fn with_system(dims: &ProblemDims, w: &WeightVector, system: FacetSystem) -> Result<Self> {
        let eff = effective_dims(dims, w)?;
        if system.dims != eff {
            return Err(Error::InvalidDims(format!(
                "facet system is for {}, need {eff}",
                system.dims
            )));
        }
        let generators = generating_vertices(&eff)?;
        Ok(Self::from_parts(eff, w.clone(), generators, system))
    }

    fn from_parts(
        dims: ProblemDims,
        w: WeightVector,
        generators: Vec<SymbolicVertex>,
        system: FacetSystem,
    ) -> Self {
        let facets = system.instantiate(&w);
        Self {
            dims,
            w,
            generators,
            system,
            facets,
        }
    }

    /// Dimensions with `r` equal to the number of positive weights.
    pub fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    pub fn weights(&self) -> &WeightVector {
        &self.w
    }

    pub fn generators(&self) -> &[SymbolicVertex] {
        &self.generators
    }

    pub fn system(&self) -> &FacetSystem {
        &self.system
    }

    pub fn facets(&self) -> &[NumericFacet] {
        &self.facets
    }

    /// Distinct generator values at `w`, sorted descending.
    pub fn vertices(&self) -> Result<Vec<Vec<BigRational>>> {
        sorted_generator_points(&self.generators, &self.w)
    }

    /// All distinct permutations of all generator values.
    pub fn vertex_orbit(&self) -> Result<Vec<Vec<BigRational>>> {
        let mut out = Vec::new();
        for v in self.vertices()? {
            out.extend(permutation_orbit(&v));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Evaluates every facet on `λ` sorted descending.
    ///
    /// `λ` must have length `d` and sum to `N` within [`MEMBERSHIP_TOL`].
    pub fn membership(&self, lambda: &[f64]) -> Result<Membership> {
        if lambda.len() != self.dims.d {
            return Err(Error::DimensionMismatch {
                expected: self.dims.d,
                found: lambda.len(),
            });
        }
        if lambda.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfiguration(
                "non-finite occupation number".into(),
            ));
        }
        let sum: f64 = lambda.iter().sum();
        let n = self.dims.n as f64;
        if (sum - n).abs() > MEMBERSHIP_TOL {
            return Err(Error::Normalization { sum, expected: n });
        }
        let mut sorted = lambda.to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let slacks: Vec<f64> = self.facets.iter().map(|f| f.slack(&sorted)).collect();
        let violated: Vec<usize> = (0..slacks.len())
            .filter(|&i| slacks[i] < -MEMBERSHIP_TOL)
            .collect();
        let tight: Vec<usize> = (0..slacks.len())
            .filter(|&i| slacks[i].abs() <= MEMBERSHIP_TOL)
            .collect();
        Ok(Membership {
            member: violated.is_empty(),
            slacks,
            violated,
            tight,
        })
    }

    /// Exact facet test on rational input.
    pub fn contains_exact(&self, lambda: &[BigRational]) -> Result<bool> {
        let mut sorted = self.check_exact(lambda)?;
        sorted.sort_by(|a, b| b.cmp(a));
        Ok(self
            .facets
            .iter()
            .all(|f| f.slack_exact(&sorted) >= BigRational::zero()))
    }

    fn check_exact(&self, lambda: &[BigRational]) -> Result<Vec<BigRational>> {
        if lambda.len() != self.dims.d {
            return Err(Error::DimensionMismatch {
                expected: self.dims.d,
                found: lambda.len(),
            });
        }
        let sum: BigRational = lambda.iter().sum();
        if sum != BigRational::from_integer(self.dims.n.into()) {
            return Err(Error::Normalization {
                sum: crate::weights::to_f64(&sum),
                expected: self.dims.n as f64,
            });
        }
        Ok(lambda.to_vec())
    }

    /// Independent check by exact LP: is `λ` a convex combination of the
    /// full vertex orbit? Only offered for `d <= EXACT_LP_MAX_D`.
    pub fn membership_exact_lp(&self, lambda: &[BigRational]) -> Result<bool> {
        if self.dims.d > EXACT_LP_MAX_D {
            return Err(Error::CapacityExceeded {
                what: "d for the exact orbit LP",
                value: self.dims.d as u128,
                cap: EXACT_LP_MAX_D as u128,
            });
        }
        let lambda = self.check_exact(lambda)?;
        let orbit = self.vertex_orbit()?;
        let mut constraints = Vec::with_capacity(self.dims.d + 1);
        for (k, target) in lambda.iter().enumerate() {
            constraints.push(Constraint::new(
                orbit.iter().map(|p| p[k].clone()).collect(),
                Relation::Eq,
                target.clone(),
            ));
        }
        constraints.push(Constraint::new(
            vec![BigRational::one(); orbit.len()],
            Relation::Eq,
            BigRational::one(),
        ));
        let lp = LinearProgram {
            objective: vec![BigRational::zero(); orbit.len()],
            constraints,
        };
        Ok(matches!(solve(&lp), LpOutcome::Optimal { .. }))
    }
}

/// One-shot membership test; builds the polytope each call.
pub fn membership(lambda: &[f64], dims: &ProblemDims, w: &WeightVector) -> Result<Membership> {
    Polytope::new(dims, w)?.membership(lambda)
}
