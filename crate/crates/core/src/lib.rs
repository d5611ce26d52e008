//! Asymptotics of infinite Coxeter root systems: positive roots, normalized
//! roots, limit roots on the isotropic cone, dominance, and the dominance
//! neighborhoods around limit points of dihedral reflection subgroups.
//!
//! Everything works in the free datum, where the simple roots are the
//! standard basis of `V` and the bilinear form is given by its Gram matrix.
//! Generator indices are 0-based in the library API and 1-based in every
//! text format.

pub mod cli;
pub mod conic;
pub mod datum;
pub mod dihedral;
pub mod dominance;
mod error;
pub mod format;
pub mod limits;
pub mod render;
pub mod rootgen;
mod spatial;

pub use datum::{
    parse_coxeter_matrix, parse_gram_matrix, parse_overrides, Bond, BondClass, BondOverride,
    CoxeterDatum, Vector,
};
pub use dihedral::{
    chebyshev_c, make_dihedral_pair, maximal_dihedral_plane, DihedralPair, PairKind, Side,
};
pub use dominance::{
    dominance_cone, dominance_present, dominance_verdict, dominates_oracle, dominates_separation,
    Direction, DominanceVerdict, Method,
};
pub use error::{Error, Result};
pub use limits::{
    certify_neighborhood, dot_action, estimate_limit_cloud, fundamental_cone_contains,
    line_isotropic_intersections, neighborhood_membership, sample_e2, shrink_witness,
    verify_geometric_action, LimitCloud, NeighborhoodProbe, Provenance,
};
pub use rootgen::{
    apply_word, generate_positive_roots, isotropy, normalize, NormalizedPoint, Root, RootTable,
};
