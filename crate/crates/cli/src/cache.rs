//! On-disk cache of symbolic facet systems, one JSON file per `(N, d, r)`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use spectral_polytope::chambers::enumerate_sequences_with_caps;
use spectral_polytope::polytope::facets::facets_symbolic_from_generators;
use spectral_polytope::polytope::vertices::generators_from_sequences;
use spectral_polytope::polytope::FacetSystem;
use spectral_polytope::ProblemDims;

use crate::config::Caps;
use crate::error::CliResult;

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: u32,
    sha256: String,
    system: FacetSystem,
}

/// Hex SHA-256 of the compact JSON serialization of `system`.
pub fn content_hash(system: &FacetSystem) -> String {
    let bytes = serde_json::to_vec(system).expect("facet systems serialize");
    hex::encode(Sha256::digest(bytes))
}

/// Derives the facet system from scratch, honoring the caps.
pub fn derive_system(dims: &ProblemDims, caps: &Caps) -> CliResult<FacetSystem> {
    let seqs = enumerate_sequences_with_caps(dims, caps.config, caps.r)?;
    let gens: Vec<_> = generators_from_sequences(&seqs, dims.d)?
        .into_iter()
        .map(|g| g.vertex)
        .collect();
    Ok(facets_symbolic_from_generators(&gens, dims)?)
}

#[derive(Clone, Debug)]
pub struct FacetCache {
    dir: Option<PathBuf>,
}

impl FacetCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn path(&self, dims: &ProblemDims) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| {
            d.join("facets")
                .join(format!("N{}-d{}-r{}.json", dims.n, dims.d, dims.r))
        })
    }

    /// Cached system if present and intact, otherwise derived and stored.
    /// With `verify`, a cached system is also re-derived and replaced on
    /// disagreement.
    pub fn get(&self, dims: &ProblemDims, caps: &Caps, verify: bool) -> CliResult<FacetSystem> {
        let Some(path) = self.path(dims) else {
            return derive_system(dims, caps);
        };
        if path.exists() {
            match load(&path, dims) {
                Ok(system) if !verify => return Ok(system),
                Ok(system) => {
                    let fresh = derive_system(dims, caps)?;
                    if fresh == system {
                        return Ok(fresh);
                    }
                    eprintln!(
                        "warning: cached facet system {} disagrees with a fresh derivation; replacing it",
                        path.display()
                    );
                    store(&path, &fresh);
                    return Ok(fresh);
                }
                Err(reason) => {
                    eprintln!(
                        "warning: cache entry {} is corrupted ({reason}); recomputing",
                        path.display()
                    );
                }
            }
        }
        let system = derive_system(dims, caps)?;
        store(&path, &system);
        Ok(system)
    }
}

fn load(path: &Path, dims: &ProblemDims) -> std::result::Result<FacetSystem, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let entry: Entry = serde_json::from_str(&text).map_err(|e| format!("unreadable: {e}"))?;
    if entry.schema != 1 {
        return Err(format!("unknown schema {}", entry.schema));
    }
    if content_hash(&entry.system) != entry.sha256 {
        return Err("content hash mismatch".into());
    }
    if entry.system.dims != *dims {
        return Err(format!("entry is for {}", entry.system.dims));
    }
    Ok(entry.system)
}

/// Writes through a temporary file and a rename; failures only warn.
fn store(path: &Path, system: &FacetSystem) {
    let entry = Entry {
        schema: 1,
        sha256: content_hash(system),
        system: system.clone(),
    };
    let result = (|| -> std::io::Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(
            &tmp,
            serde_json::to_vec_pretty(&entry).expect("cache entries serialize"),
        )?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        eprintln!("warning: cannot write cache entry {}: {e}", path.display());
    }
}
