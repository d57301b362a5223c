//! Species data: vertex division algebras, bimodules, the triangular ring,
//! valued graphs and their root systems.

mod graph;
mod scenario;

pub use graph::{
    cartan_matrix, dynkin_name, is_finite_type, lie_algebra_dimension, positive_roots, valued_graph,
    with_roots, RootDatum, ValuedEdge, ValuedGraph,
};
pub use scenario::{
    ring_center, AlgebraSource, Bimodule, Certification, DivisionAlgebraHandle, SpeciesScenario, Vertex,
};
pub(crate) use scenario::{check_left_rep, combine};
