//! The category of triples `(X, Y, eta)` over a species scenario.

mod abelian;
mod endo;
mod homext;
mod object;

pub use abelian::{
    abelian_ops, is_projective, projective_resolution, quotient_object, sub_object, torsion_pair, AbelianOps,
    Resolution, TorsionPair,
};
pub use endo::{
    decompose, end_algebra, end_restriction_is_iso, find_isomorphism, is_universal, Decomposition, EndAlgebra,
    Summand, UniversalVerdict,
};
pub use homext::{equivariant_maps, euler_form, ext1, hom, hom_dim, ExtResult};
pub(crate) use homext::equivariant_maps_raw;
pub use object::{
    direct_sum, direct_sum_all, fy_action, fy_dim, fy_object, tensor_map, universal_extension, DirectSum, ObjRef,
    TripleMorphism, TripleObject, VertexModule, YPart,
};

/// Validates a triple; alias of [`TripleObject::validate`].
pub fn validate(z: &TripleObject) -> crate::Result<()> {
    z.validate()
}
