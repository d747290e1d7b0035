//! One function per subcommand; each returns the full output text so that
//! nothing is printed before the command has succeeded.

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use spectral_polytope::chambers::enumerate_sequences_with_caps;
use spectral_polytope::functional::{ew_two_step, ew_via_convex, f_w, fbar_w, SolverOptions};
use spectral_polytope::manybody::spectrum::natural_occupations;
use spectral_polytope::manybody::{
    build_hamiltonian, ew_exact, gamma_min, spectrum, CMatrix, FockSpace, OneBodyOperator,
    TwoBodyInteraction,
};
use spectral_polytope::polytope::membership::EXACT_LP_MAX_D;
use spectral_polytope::polytope::vertices::generators_from_sequences;
use spectral_polytope::polytope::{FacetSystem, Polytope};
use spectral_polytope::weights::parse_decimal_list;
use spectral_polytope::{ProblemDims, WeightVector};

use crate::args::DimsArgs;
use crate::cache::content_hash;
use crate::config::{parse_weights, RunConfig};
use crate::error::{CliError, CliResult};
use crate::input::InputFile;

/// Text for stdout and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    pub fn json(value: &Value, code: i32) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        text.push('\n');
        Self { text, code }
    }
}

/// Weight vectors for the figure export when none are given.
pub const FIGURE_WEIGHTS: [&str; 3] = ["1,0,0", "0.7,0.3,0", "0.5,0.3,0.2"];

fn exact_strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn weights_json(w: &WeightVector) -> Value {
    json!({ "exact": exact_strings(w.exact()), "value": w.as_f64() })
}

pub fn sequences(cfg: &RunConfig, a: DimsArgs) -> CliResult<Outcome> {
    let dims = cfg.dims(a.n, a.d, a.r)?;
    let seqs = enumerate_sequences_with_caps(&dims, cfg.caps.config, cfg.caps.r)?;
    Ok(Outcome::json(
        &json!({ "schema": 1, "dims": dims, "count": seqs.len(), "sequences": seqs }),
        0,
    ))
}

pub fn vertices(cfg: &RunConfig, a: DimsArgs, w: Option<&str>) -> CliResult<Outcome> {
    let dims = cfg.dims(a.n, a.d, a.r)?;
    let w = w.map(parse_weights).transpose()?;
    if let Some(w) = &w {
        check_weight_count(w, &dims)?;
    }
    let seqs = enumerate_sequences_with_caps(&dims, cfg.caps.config, cfg.caps.r)?;
    let gens = generators_from_sequences(&seqs, dims.d)?;
    let mut records = Vec::with_capacity(gens.len());
    for g in &gens {
        let mut rec = json!({ "symbolic": g.vertex.symbolic(), "sequence": g.sequence });
        if let Some(w) = &w {
            rec["exact"] = json!(exact_strings(&g.vertex.evaluate(w)?));
            rec["value"] = json!(g.vertex.evaluate_f64(w)?);
        }
        records.push(rec);
    }
    let mut out = json!({ "schema": 1, "dims": dims, "count": gens.len(), "vertices": records });
    if let Some(w) = &w {
        out["w"] = weights_json(w);
    }
    Ok(Outcome::json(&out, 0))
}

fn check_weight_count(w: &WeightVector, dims: &ProblemDims) -> CliResult<()> {
    if w.r() > dims.r {
        return Err(CliError::Usage(format!(
            "{} positive weights given but r = {}",
            w.r(),
            dims.r
        )));
    }
    Ok(())
}

fn facet_records(system: &FacetSystem, w: Option<&WeightVector>) -> Vec<Value> {
    let n = system.dims.n;
    system
        .facets
        .iter()
        .map(|f| {
            let mut rec = json!({
                "c": f.c,
                "a0": f.a0,
                "a": f.a,
                "kind": f.kind(),
                "normalization": f.normalization(n),
                "render": f.render(n),
            });
            if let Some(w) = w {
                let rhs = f.rhs(w);
                rec["rhs"] = json!(rhs.to_string());
                rec["rhs_value"] = json!(rhs.to_f64());
            }
            rec
        })
        .collect()
}

pub fn facets(cfg: &RunConfig, a: DimsArgs, w: Option<&str>, verify: bool) -> CliResult<Outcome> {
    let dims = cfg.dims(a.n, a.d, a.r)?;
    let w = w.map(parse_weights).transpose()?;
    if let Some(w) = &w {
        check_weight_count(w, &dims)?;
    }
    let system = cfg.cache.get(&dims, &cfg.caps, verify)?;
    let mut out = json!({
        "schema": 1,
        "dims": dims,
        "inequality_count": system.inequality_count(),
        "facet_count": system.facets.len(),
        "sha256": content_hash(&system),
        "facets": facet_records(&system, w.as_ref()),
    });
    if let Some(w) = &w {
        out["w"] = weights_json(w);
    }
    Ok(Outcome::json(&out, 0))
}

fn polytope(cfg: &RunConfig, n: usize, d: usize, w: &WeightVector) -> CliResult<Polytope> {
    let dims = cfg.dims(n, d, w.r())?;
    let system = cfg.cache.get(&dims, &cfg.caps, false)?;
    Ok(Polytope::with_system(&dims, w, system)?)
}

/// Per-facet slacks of `lambda` (any order) on `poly`.
fn membership_json(poly: &Polytope, lambda: &[f64]) -> CliResult<(bool, Value)> {
    let m = poly.membership(lambda)?;
    let n = poly.dims().n;
    let facets: Vec<Value> = poly
        .system()
        .facets
        .iter()
        .enumerate()
        .map(|(i, f)| {
            json!({
                "render": f.render(n),
                "slack": m.slacks[i],
                "tight": m.tight.contains(&i),
                "violated": m.violated.contains(&i),
            })
        })
        .collect();
    Ok((m.member, json!(facets)))
}

pub fn member(
    cfg: &RunConfig,
    n: usize,
    d: usize,
    w: &str,
    lambda: &str,
    exact: bool,
) -> CliResult<Outcome> {
    let w = parse_weights(w)?;
    let lam_exact = parse_decimal_list(lambda)
        .map_err(|e| CliError::Usage(format!("malformed --lambda: {e}")))?;
    if lam_exact.len() != d {
        return Err(CliError::Usage(format!(
            "--lambda has {} entries, expected d = {d}",
            lam_exact.len()
        )));
    }
    let lam: Vec<f64> = lam_exact
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::NAN))
        .collect();
    let poly = polytope(cfg, n, d, &w)?;
    let (float_member, facets) = membership_json(&poly, &lam)?;
    let mut member = float_member;
    let mut out = json!({
        "schema": 1,
        "dims": poly.dims(),
        "w": weights_json(&w),
        "lambda": lam,
        "facets": facets,
    });
    if exact {
        let by_facets = poly.contains_exact(&lam_exact)?;
        let by_lp = if d <= EXACT_LP_MAX_D {
            Some(poly.membership_exact_lp(&lam_exact)?)
        } else {
            None
        };
        out["exact"] = json!({ "facets": by_facets, "lp": by_lp });
        member = by_facets;
    }
    out["member"] = json!(member);
    Ok(Outcome::json(&out, if member { 0 } else { 1 }))
}

struct Loaded {
    file: InputFile,
    d: usize,
    space: FockSpace,
    h: OneBodyOperator,
    v: TwoBodyInteraction,
}

fn load_hamiltonian(cfg: &RunConfig, path: &std::path::Path) -> CliResult<Loaded> {
    let file = InputFile::read(path)?;
    let d = file.d()?;
    let space = cfg.space(file.n, d)?;
    let h = file.one_body()?;
    let v = file.interaction()?;
    Ok(Loaded {
        file,
        d,
        space,
        h,
        v,
    })
}

fn ground_state_rdm(space: &FockSpace, vectors: &CMatrix) -> CliResult<CMatrix> {
    let psi = vectors.column(0);
    let rho = &psi * psi.adjoint();
    Ok(space.one_rdm(&rho)?)
}

pub fn spectrum_cmd(
    cfg: &RunConfig,
    path: &std::path::Path,
    levels: Option<usize>,
) -> CliResult<Outcome> {
    let l = load_hamiltonian(cfg, path)?;
    let ham = build_hamiltonian(&l.h, &l.v, &l.space)?;
    let spec = spectrum(&ham)?;
    let k = levels
        .unwrap_or(spec.energies.len())
        .min(spec.energies.len());
    let lambda = natural_occupations(&ground_state_rdm(&l.space, &spec.vectors)?)?;
    Ok(Outcome::json(
        &json!({
            "schema": 1,
            "N": l.file.n,
            "d": l.d,
            "dim": l.space.dim(),
            "energies": &spec.energies[..k],
            "ground_state": { "energy": spec.energies[0], "lambda": lambda },
        }),
        0,
    ))
}

fn options(cfg: &RunConfig, file: &InputFile) -> SolverOptions {
    SolverOptions {
        seed: cfg.seed,
        ..file.options.clone()
    }
}

pub fn energy(cfg: &RunConfig, path: &std::path::Path, w: Option<&str>) -> CliResult<Outcome> {
    let l = load_hamiltonian(cfg, path)?;
    let w = l.file.weights(w)?;
    let n = l.file.n;
    let poly = polytope(cfg, n, l.d, &w)?;
    let ham = build_hamiltonian(&l.h, &l.v, &l.space)?;
    let spec = spectrum(&ham)?;
    let exact = ew_exact(&spec, &w)?;
    let gamma = gamma_min(&spec, &w)?;
    let lambda = natural_occupations(&l.space.one_rdm(&gamma)?)?;
    let (member, facets) = membership_json(&poly, &lambda)?;
    let convex = ew_via_convex(&l.h, &l.v, &w, n, &options(cfg, &l.file))?;
    Ok(Outcome::json(
        &json!({
            "schema": 1,
            "N": n,
            "d": l.d,
            "w": weights_json(&w),
            "energies": &spec.energies[..w.r()],
            "ew_exact": exact,
            "ew_convex": { "value": convex.value, "gap": convex.gap, "iterations": convex.iterations },
            "lambda": lambda,
            "member": member,
            "facets": facets,
        }),
        0,
    ))
}

pub fn functional(
    cfg: &RunConfig,
    path: &std::path::Path,
    w: Option<&str>,
    fixed: bool,
) -> CliResult<Outcome> {
    let file = InputFile::read(path)?;
    let d = file.d()?;
    let n = file.n;
    let space = cfg.space(n, d)?;
    let w = file.weights(w)?;
    let v = file.interaction()?;
    let opts = options(cfg, &file);
    let gamma = file.gamma()?;
    if gamma.is_none() && file.h.is_none() {
        return Err(CliError::Usage("input needs \"gamma\" or \"h\"".into()));
    }
    let mut out = json!({ "schema": 1, "N": n, "d": d, "w": weights_json(&w), "options": opts });
    if let Some(g) = &gamma {
        let fbar = fbar_w(g, &v, &w, n, &opts)?;
        let lb = fbar.lower_bound.unwrap_or(f64::NEG_INFINITY);
        out["fbar"] = json!({
            "value": fbar.value,
            "lower_bound": fbar.lower_bound,
            "gap": fbar.value - lb,
            "residual": fbar.residual,
            "iterations": fbar.iterations,
        });
        if fixed {
            let f = f_w(g, &v, &w, n, &opts)?;
            out["f"] =
                json!({ "value": f.value, "residual": f.residual, "iterations": f.iterations });
        }
    } else if fixed {
        return Err(CliError::Usage("--fixed-spectrum needs \"gamma\"".into()));
    }
    if file.h.is_some() {
        let h = file.one_body()?;
        let ham = build_hamiltonian(&h, &v, &space)?;
        let exact = ew_exact(&spectrum(&ham)?, &w)?;
        let convex = ew_via_convex(&h, &v, &w, n, &opts)?;
        let two_step = ew_two_step(&h, &v, &w, n, &opts)?;
        out["ew_exact"] = json!(exact);
        out["ew_convex"] =
            json!({ "value": convex.value, "gap": convex.gap, "iterations": convex.iterations });
        out["ew_two_step"] = json!(two_step);
    }
    Ok(Outcome::json(&out, 0))
}

/// Orbit points ordered around their centroid when they lie in a plane.
fn boundary_order(mut pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if pts.first().is_some_and(|p| p.len() == 3) {
        let m = pts.len() as f64;
        let cx = pts.iter().map(|p| p[0]).sum::<f64>() / m;
        let cy = pts.iter().map(|p| p[1]).sum::<f64>() / m;
        pts.sort_by(|a, b| {
            (a[1] - cy)
                .atan2(a[0] - cx)
                .total_cmp(&(b[1] - cy).atan2(b[0] - cx))
        });
    }
    pts
}

/// Non-interacting minimizer occupations for `h = diag(0, 1, ..., d-1)`.
pub fn diagonal_minimizer(space: &FockSpace, w: &WeightVector) -> CliResult<Vec<f64>> {
    let e: Vec<f64> = (0..space.d()).map(|k| k as f64).collect();
    let ham = build_hamiltonian(
        &OneBodyOperator::diagonal(&e),
        &TwoBodyInteraction::zero(space.d()),
        space,
    )?;
    let gamma = gamma_min(&spectrum(&ham)?, w)?;
    Ok(natural_occupations(&space.one_rdm(&gamma)?)?)
}

pub fn figure_s1(cfg: &RunConfig, n: usize, d: usize, ws: &[String]) -> CliResult<Outcome> {
    let labels: Vec<String> = if ws.is_empty() {
        FIGURE_WEIGHTS.iter().map(|s| s.to_string()).collect()
    } else {
        ws.to_vec()
    };
    let space = cfg.space(n, d)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for label in &labels {
        let w = parse_weights(label)?;
        let poly = polytope(cfg, n, d, &w)?;
        let orbit: Vec<Vec<f64>> = poly
            .vertex_orbit()?
            .iter()
            .map(|p| p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect();
        for (i, p) in boundary_order(orbit).into_iter().enumerate() {
            rows.push(row(label, "vertex", i, &p));
        }
        rows.push(row(label, "minimizer", 0, &diagonal_minimizer(&space, &w)?));
    }
    let mut header = vec!["w".to_string(), "kind".into(), "index".into()];
    header.extend((1..d).map(|k| format!("lambda{k}")));
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Output(e.to_string());
    wtr.write_record(&header).map_err(fail)?;
    for r in &rows {
        wtr.write_record(r).map_err(fail)?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    Ok(Outcome {
        text: String::from_utf8(bytes).expect("CSV output is UTF-8"),
        code: 0,
    })
}

/// `λ_d` is dropped: it is fixed by `Σλ = N`.
fn row(label: &str, kind: &str, index: usize, lambda: &[f64]) -> Vec<String> {
    let mut r = vec![label.to_string(), kind.to_string(), index.to_string()];
    r.extend(lambda[..lambda.len() - 1].iter().map(|x| format!("{x:?}")));
    r
}
