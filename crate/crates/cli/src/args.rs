use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use spectral_polytope::chambers::DEFAULT_R_CAP;
use spectral_polytope::fock::DEFAULT_CONFIG_CAP;
use spectral_polytope::manybody::operators::DEFAULT_D_CAP;

#[derive(Debug, Parser)]
#[command(
    name = "spolytope",
    version,
    about = "Spectral polytopes of ensemble one-particle density matrices"
)]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Facet-system cache directory.
    #[arg(long, global = true, env = "SPOLYTOPE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Disable the facet-system cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Largest admissible N-fermion dimension C(d,N) for dense operators.
    #[arg(long, global = true, default_value_t = DEFAULT_D_CAP)]
    pub d_cap: u128,

    /// Largest admissible number of weights.
    #[arg(long, global = true, default_value_t = DEFAULT_R_CAP)]
    pub r_cap: usize,

    /// Largest admissible configuration count for enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_CONFIG_CAP)]
    pub config_cap: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct DimsArgs {
    /// Particle number.
    #[arg(long = "N")]
    pub n: usize,
    /// One-particle dimension.
    #[arg(long)]
    pub d: usize,
    /// Number of positive weights.
    #[arg(long)]
    pub r: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Realizable sequences of r lowest configurations.
    Sequences(DimsArgs),
    /// Generating vertices, symbolic and optionally evaluated at w.
    Vertices {
        #[command(flatten)]
        dims: DimsArgs,
        /// Comma-separated weights.
        #[arg(long)]
        w: Option<String>,
    },
    /// Symbolic facet system, optionally instantiated at w.
    Facets {
        #[command(flatten)]
        dims: DimsArgs,
        #[arg(long)]
        w: Option<String>,
        /// Re-derive the system and compare against the cache.
        #[arg(long)]
        verify: bool,
    },
    /// Membership of an occupation vector in the polytope at w.
    Member {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        w: String,
        /// Comma-separated occupations (decimals or fractions).
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Also decide membership with the exact orbit LP (small d only).
        #[arg(long)]
        exact: bool,
    },
    /// Low-lying spectrum of a Hamiltonian file.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        /// Number of levels to report (default: all).
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Ensemble energy, minimizer occupations and facet slacks.
    Energy {
        #[arg(long)]
        input: PathBuf,
        /// Weights; overrides the input file.
        #[arg(long)]
        w: Option<String>,
    },
    /// Relaxed functional at a one-particle matrix, or the energy route.
    Functional {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        w: Option<String>,
        /// Also evaluate the fixed-spectrum functional.
        #[arg(long)]
        fixed_spectrum: bool,
    },
    /// CSV of vertex orbits and non-interacting minimizers.
    #[command(name = "figure-s1")]
    FigureS1 {
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Weight vectors; repeat the flag for several polytopes.
        #[arg(long)]
        w: Vec<String>,
    },
    /// Cross-module property suite on seeded random instances.
    Validate {
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}
