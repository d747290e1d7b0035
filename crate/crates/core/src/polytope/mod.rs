//! The spectral polytope: vertices, facets, majorization and membership.

pub mod facets;
pub mod majorization;
pub mod membership;
pub mod vertices;

pub use facets::{facets_numeric, facets_symbolic, Facet, FacetKind, FacetSystem, NumericFacet};
pub use majorization::{is_majorized, is_majorized_exact, rado_membership};
pub use membership::{membership, Membership, Polytope};
pub use vertices::{generating_vertices, vertex_from_sequence, SymbolicVertex};
