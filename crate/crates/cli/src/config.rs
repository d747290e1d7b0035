use std::path::PathBuf;

use spectral_polytope::chambers::DEFAULT_R_CAP;
use spectral_polytope::fock::DEFAULT_CONFIG_CAP;
use spectral_polytope::manybody::operators::DEFAULT_D_CAP;
use spectral_polytope::manybody::FockSpace;
use spectral_polytope::{ProblemDims, WeightVector};

use crate::args::Cli;
use crate::cache::FacetCache;
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest N-fermion dimension for dense operators.
    pub d: u128,
    pub r: usize,
    /// Largest configuration count for enumeration.
    pub config: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            d: DEFAULT_D_CAP,
            r: DEFAULT_R_CAP,
            config: DEFAULT_CONFIG_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub caps: Caps,
    pub cache: FacetCache,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        if cli.d_cap == 0 || cli.r_cap == 0 || cli.config_cap == 0 {
            return Err(CliError::Usage("caps must be positive".into()));
        }
        let dir = if cli.no_cache {
            None
        } else {
            cli.cache_dir.clone().or_else(default_cache_dir)
        };
        Ok(Self {
            caps: Caps {
                d: cli.d_cap,
                r: cli.r_cap,
                config: cli.config_cap,
            },
            cache: FacetCache::new(dir),
            seed: cli.seed,
        })
    }

    /// Dimensions checked against the `r` and configuration caps.
    pub fn dims(&self, n: usize, d: usize, r: usize) -> CliResult<ProblemDims> {
        let dims = ProblemDims::new(n, d, r)?;
        if r > self.caps.r {
            return Err(spectral_polytope::Error::CapacityExceeded {
                what: "r",
                value: r as u128,
                cap: self.caps.r as u128,
            }
            .into());
        }
        if dims.fock_dim() > self.caps.config {
            return Err(spectral_polytope::Error::CapacityExceeded {
                what: "C(d,N)",
                value: dims.fock_dim(),
                cap: self.caps.config,
            }
            .into());
        }
        Ok(dims)
    }

    /// Fock space checked against the D cap.
    pub fn space(&self, n: usize, d: usize) -> CliResult<FockSpace> {
        Ok(FockSpace::with_cap(n, d, self.caps.d)?)
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(x).join("spolytope"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("spolytope"))
}

pub fn parse_weights(s: &str) -> CliResult<WeightVector> {
    Ok(WeightVector::parse(s)?)
}
