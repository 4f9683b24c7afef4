//! Combinatorics of angled trees, tree coverings, and Hubbard forests.
//!
//! All angle arithmetic is exact: angles are rational numbers of turns,
//! reduced mod 1, and nothing in this crate ever rounds.

pub mod angle;
pub mod covering;
pub mod cycle;
pub mod doc;
pub mod forest;
mod homogenize;
pub mod hull;
pub mod layout;
pub mod schema;
pub mod tree;

pub use angle::{format_rational, parse_rational, Angle};
pub use covering::{access_dynamics, compose, homogenize, Covering, ExtensionResult};
pub use doc::{parse_document, serialize_document, DocError, Document, FORMAT_VERSION};
pub use cycle::{
    anchor_choices, external_arguments, homogenize_cycle, restrict_to_cycle, return_forest,
    return_tree, AnchorChoice, AnchorSite, ArgumentAssignment, CycleContext, CycleError,
};
pub use forest::{
    forest_isomorphic, ConditionTag, ForestIsomorphism, HubbardForest, ValidationReport,
    VertexClass, Violation,
};
pub use hull::{hull, HullError};
pub use layout::{has_edge_crossings, planar_layout, respects_ring_orientation, Point};
pub use schema::{
    automorphisms, equivalences, schema_equivalent, MappingSchema, SchemaBijection,
    SchemaVertexId,
};
pub use tree::{AngledTree, EdgeId, PseudoAccess, Spoke, VertexId};
