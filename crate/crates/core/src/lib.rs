//! Exact computations in categories of triples `(X, Y, eta)` over a Q-species.
//!
//! The crate works with a finite species: division algebras on two sides of a
//! bipartite graph, bimodules on the edges, and the triangular matrix ring they
//! define. Objects are triples of modules plus a structure map
//! `eta : F(Y) -> X`. On top of exact rational linear algebra it computes Hom
//! and Ext¹, projective resolutions, kernels and cokernels, torsion-pair
//! sequences, Krull–Schmidt decompositions and representation type.

pub mod catalog;
pub mod checks;
pub mod cli;
pub mod error;
pub mod exactalg;
pub mod extcat;
pub mod format;
pub mod reptype;
pub mod species;
pub mod wittmod;

pub use error::{Error, Result};
