//! Cross-module property suite on seeded random instances.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use spectral_polytope::functional::{ew_via_convex, SolverOptions};
use spectral_polytope::manybody::random::{
    random_interaction, random_one_body, random_unitary, random_weights,
};
use spectral_polytope::manybody::spectrum::{conjugate_diagonal, natural_occupations};
use spectral_polytope::manybody::{
    build_hamiltonian, ew_exact, gamma_min, spectrum, FockSpace, OneBodyOperator,
    TwoBodyInteraction,
};
use spectral_polytope::polytope::membership::MEMBERSHIP_TOL;
use spectral_polytope::polytope::{FacetSystem, Polytope};
use spectral_polytope::{Error, ProblemDims, WeightVector};

use crate::commands::Outcome;
use crate::config::RunConfig;
use crate::error::CliResult;

/// Random ensembles tested against the variational bound per instance.
pub const ENSEMBLES_PER_TRIAL: usize = 10;
pub const VARIATIONAL_TOL: f64 = 1e-9;
pub const ROUTE_TOL: f64 = 1e-6;

pub const CHECKS: [&str; 3] = [
    "variational_principle",
    "polytope_consistency",
    "route_agreement",
];

struct Instance {
    dims: ProblemDims,
    h: OneBodyOperator,
    v: TwoBodyInteraction,
    w: WeightVector,
    rng: ChaCha8Rng,
}

fn instance(seed: u64, trial: usize) -> CliResult<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let n = rng.random_range(2..=3);
    let d = rng.random_range(n + 1..=5);
    let r = rng.random_range(1..=3);
    let dims = ProblemDims::new(n, d, r)?;
    let h = random_one_body(d, 1.0, &mut rng);
    let v = random_interaction(d, 0.5, &mut rng);
    let w = random_weights(r, &mut rng);
    Ok(Instance { dims, h, v, w, rng })
}

/// `None` for a skipped check, otherwise the worst signed violation
/// (positive means failure).
type Verdicts = [Option<f64>; 3];

fn run_trial(mut inst: Instance, system: FacetSystem) -> CliResult<Verdicts> {
    let ProblemDims { n, d, .. } = inst.dims;
    let space = FockSpace::new(n, d)?;
    let ham = build_hamiltonian(&inst.h, &inst.v, &space)?;
    let spec = spectrum(&ham)?;
    let e = ew_exact(&spec, &inst.w)?;
    let padded = inst.w.padded(space.dim())?;

    let mut variational = f64::NEG_INFINITY;
    for _ in 0..ENSEMBLES_PER_TRIAL {
        let u = random_unitary(space.dim(), &mut inst.rng);
        let gamma = conjugate_diagonal(&u, &padded);
        let value = (&ham * &gamma).trace().re;
        variational = variational.max(e - value - VARIATIONAL_TOL * (1.0 + e.abs()));
    }

    let consistency = match gamma_min(&spec, &inst.w) {
        Ok(g) => {
            let lambda = natural_occupations(&space.one_rdm(&g)?)?;
            let poly = Polytope::with_system(&inst.dims, &inst.w, system)?;
            let m = poly.membership(&lambda)?;
            let worst = m.slacks.iter().copied().fold(f64::INFINITY, f64::min);
            Some(-worst - MEMBERSHIP_TOL)
        }
        Err(Error::DegenerateBoundary { .. }) => None,
        Err(other) => return Err(other.into()),
    };

    let convex = ew_via_convex(&inst.h, &inst.v, &inst.w, n, &SolverOptions::default())?;
    let route = (convex.value - e).abs() - ROUTE_TOL * (1.0 + e.abs());
    Ok([Some(variational), consistency, Some(route)])
}

#[derive(Serialize)]
struct CheckReport {
    name: &'static str,
    trials: usize,
    skipped: usize,
    failures: usize,
    failed_trials: Vec<usize>,
    worst_margin: Option<f64>,
}

pub fn validate(cfg: &RunConfig, trials: usize) -> CliResult<Outcome> {
    let instances: Vec<Instance> = (0..trials)
        .map(|t| instance(cfg.seed, t))
        .collect::<CliResult<_>>()?;
    // facet systems are fetched serially so that cache writes never race
    let mut systems: BTreeMap<ProblemDims, FacetSystem> = BTreeMap::new();
    for inst in &instances {
        if !systems.contains_key(&inst.dims) {
            systems.insert(inst.dims, cfg.cache.get(&inst.dims, &cfg.caps, false)?);
        }
    }
    let verdicts: Vec<Verdicts> = instances
        .into_par_iter()
        .map(|inst| {
            let system = systems[&inst.dims].clone();
            run_trial(inst, system)
        })
        .collect::<CliResult<_>>()?;

    let checks: Vec<CheckReport> = if trials == 0 {
        Vec::new()
    } else {
        CHECKS
            .iter()
            .enumerate()
            .map(|(k, &name)| {
                let margins: Vec<(usize, f64)> = verdicts
                    .iter()
                    .enumerate()
                    .filter_map(|(t, v)| v[k].map(|m| (t, m)))
                    .collect();
                let failed_trials: Vec<usize> = margins
                    .iter()
                    .filter(|(_, m)| *m > 0.0)
                    .map(|(t, _)| *t)
                    .collect();
                CheckReport {
                    name,
                    trials,
                    skipped: trials - margins.len(),
                    failures: failed_trials.len(),
                    failed_trials,
                    worst_margin: margins.iter().map(|(_, m)| *m).reduce(f64::max),
                }
            })
            .collect()
    };
    let passed = checks.iter().all(|c| c.failures == 0);
    Ok(Outcome::json(
        &json!({ "schema": 1, "seed": cfg.seed, "trials": trials, "checks": checks, "passed": passed }),
        if passed { 0 } else { 1 },
    ))
}
