//! Kernels, images, cokernels, the torsion pair and projective resolutions.

use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{quotient_space, RatMatrix, Q};

use super::object::{
    direct_sum, fy_object, tensor_map, universal_extension, ObjRef, TripleMorphism, TripleObject, VertexModule, YPart,
};

fn col_basis(m: &RatMatrix) -> RatMatrix {
    RatMatrix::from_columns(m.rows(), &m.column_space_basis())
}

fn kernel_cols(m: &RatMatrix) -> RatMatrix {
    RatMatrix::from_columns(m.cols(), &m.kernel_basis())
}

fn restrict(module: &VertexModule, b: &RatMatrix) -> Result<VertexModule> {
    let action = module
        .action()
        .iter()
        .map(|a| {
            b.solve_matrix(&(a * b))
                .ok_or_else(|| Error::Consistency("subspace is not a submodule".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VertexModule::from_parts(b.cols(), action))
}

fn right_inverse(p: &RatMatrix) -> RatMatrix {
    p.solve_matrix(&RatMatrix::identity(p.rows())).expect("full row rank")
}

/// Subobject spanned by the given column bases (one per vertex, x then y).
///
/// Returns the subobject and its inclusion.
pub fn sub_object(z: &ObjRef, xs: &[RatMatrix], ys: &[RatMatrix]) -> Result<(ObjRef, TripleMorphism)> {
    let s = z.scenario();
    let x = z
        .x()
        .iter()
        .zip(xs)
        .map(|(m, b)| restrict(m, b))
        .collect::<Result<Vec<_>>>()?;
    let ymods = z
        .y()
        .modules()
        .iter()
        .zip(ys)
        .map(|(m, b)| restrict(m, b))
        .collect::<Result<Vec<_>>>()?;
    let y = YPart::new(s, ymods, None)?;
    let eta = (0..x.len())
        .map(|i| {
            let f = tensor_map(s, i, &y, z.y(), ys);
            xs[i]
                .solve_matrix(&(&z.eta()[i] * &f))
                .ok_or_else(|| Error::Consistency("eta does not map into the X-subspace".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let sub = Arc::new(TripleObject::new(s.clone(), x, y, eta)?);
    let incl = TripleMorphism::new_unchecked(sub.clone(), z.clone(), xs.to_vec(), ys.to_vec());
    Ok((sub, incl))
}

/// Quotient by the subobject spanned by the given column bases.
///
/// Returns the quotient and the projection.
pub fn quotient_object(z: &ObjRef, xs: &[RatMatrix], ys: &[RatMatrix]) -> Result<(ObjRef, TripleMorphism)> {
    let s = z.scenario();
    let proj = |m: &VertexModule, b: &RatMatrix| -> (VertexModule, RatMatrix) {
        let (d, p) = quotient_space(m.dim(), &b.columns());
        let sec = right_inverse(&p);
        let action = m.action().iter().map(|a| &(&p * a) * &sec).collect();
        (VertexModule::from_parts(d, action), p)
    };
    let (x, px): (Vec<_>, Vec<_>) = z.x().iter().zip(xs).map(|(m, b)| proj(m, b)).unzip();
    let (ymods, py): (Vec<_>, Vec<_>) = z.y().modules().iter().zip(ys).map(|(m, b)| proj(m, b)).unzip();
    let y = YPart::new(s, ymods, None)?;
    let mut eta = Vec::new();
    for i in 0..x.len() {
        let fp = tensor_map(s, i, z.y(), &y, &py);
        let r = right_inverse(&fp);
        let e = &(&px[i] * &z.eta()[i]) * &r;
        if &(&e * &fp) != &(&px[i] * &z.eta()[i]) {
            return Err(Error::Consistency("eta does not descend to the quotient".into()));
        }
        eta.push(e);
    }
    let quot = Arc::new(TripleObject::new(s.clone(), x, y, eta)?);
    let p = TripleMorphism::new_unchecked(z.clone(), quot.clone(), px, py);
    Ok((quot, p))
}

/// Kernel, image and cokernel of a morphism, with their structure maps.
#[derive(Clone, Debug)]
pub struct AbelianOps {
    pub kernel: ObjRef,
    pub kernel_incl: TripleMorphism,
    pub image: ObjRef,
    pub image_incl: TripleMorphism,
    /// The corestriction `source -> image`.
    pub coimage: TripleMorphism,
    pub cokernel: ObjRef,
    pub cokernel_proj: TripleMorphism,
}

pub fn abelian_ops(f: &TripleMorphism) -> Result<AbelianOps> {
    let (a, b) = (f.source(), f.target());
    let kx: Vec<RatMatrix> = f.u().iter().map(kernel_cols).collect();
    let ky: Vec<RatMatrix> = f.v().iter().map(kernel_cols).collect();
    let (kernel, kernel_incl) = sub_object(a, &kx, &ky)?;
    let ix: Vec<RatMatrix> = f.u().iter().map(col_basis).collect();
    let iy: Vec<RatMatrix> = f.v().iter().map(col_basis).collect();
    let (image, image_incl) = sub_object(b, &ix, &iy)?;
    let cu = ix.iter().zip(f.u()).map(|(bm, u)| bm.solve_matrix(u).expect("u lands in its image")).collect();
    let cv = iy.iter().zip(f.v()).map(|(bm, v)| bm.solve_matrix(v).expect("v lands in its image")).collect();
    let coimage = TripleMorphism::new_unchecked(a.clone(), image.clone(), cu, cv);
    let (cokernel, cokernel_proj) = quotient_object(b, &ix, &iy)?;
    let ops = AbelianOps { kernel, kernel_incl, image, image_incl, coimage, cokernel, cokernel_proj };
    ops.verify(f)?;
    Ok(ops)
}

impl AbelianOps {
    /// Exactness of `0 -> ker -> Z -> im -> 0` and `0 -> im -> Z' -> coker -> 0`.
    fn verify(&self, f: &TripleMorphism) -> Result<()> {
        let fail = |what: &str| Err(Error::Consistency(format!("abelian_ops: {what}")));
        for m in [&self.kernel_incl, &self.image_incl, &self.coimage, &self.cokernel_proj] {
            m.validate()?;
        }
        if !self.coimage.after(&self.kernel_incl).is_zero() {
            return fail("kernel does not map to zero");
        }
        if &self.image_incl.after(&self.coimage) != f {
            return fail("image factorization differs from f");
        }
        if !self.cokernel_proj.after(&self.image_incl).is_zero() {
            return fail("image does not die in the cokernel");
        }
        let dims = |z: &ObjRef| -> Vec<usize> {
            let mut v: Vec<usize> = z.x().iter().map(VertexModule::dim).collect();
            v.extend(z.y().modules().iter().map(VertexModule::dim));
            v
        };
        let (k, i, c, a, b) =
            (dims(&self.kernel), dims(&self.image), dims(&self.cokernel), dims(f.source()), dims(f.target()));
        for t in 0..a.len() {
            if k[t] + i[t] != a[t] || i[t] + c[t] != b[t] {
                return fail("dimension count");
            }
        }
        if self.coimage.rank_vector() != i || self.cokernel_proj.rank_vector() != c {
            return fail("structure maps are not surjective");
        }
        if self.kernel_incl.rank_vector() != k || self.image_incl.rank_vector() != i {
            return fail("structure maps are not injective");
        }
        Ok(())
    }
}

/// `0 -> (X,0,0) -> Z -> (0,Y,0) -> 0`.
#[derive(Clone, Debug)]
pub struct TorsionPair {
    pub sub: ObjRef,
    pub sub_incl: TripleMorphism,
    pub quot: ObjRef,
    pub quot_proj: TripleMorphism,
}

pub fn torsion_pair(z: &ObjRef) -> Result<TorsionPair> {
    let sub = Arc::new(z.x_part());
    let quot = Arc::new(z.y_part());
    let sub_incl = TripleMorphism::new(
        sub.clone(),
        z.clone(),
        z.x().iter().map(|m| RatMatrix::identity(m.dim())).collect(),
        z.y().modules().iter().map(|m| RatMatrix::zeros(m.dim(), 0)).collect(),
    )?;
    let quot_proj = TripleMorphism::new(
        z.clone(),
        quot.clone(),
        z.x().iter().map(|m| RatMatrix::zeros(0, m.dim())).collect(),
        z.y().modules().iter().map(|m| RatMatrix::identity(m.dim())).collect(),
    )?;
    if !quot_proj.after(&sub_incl).is_zero() {
        return Err(Error::Consistency("torsion maps do not compose to zero".into()));
    }
    let ops = abelian_ops(&sub_incl)?;
    if !ops.kernel.is_zero() || ops.cokernel.dim_vector() != quot.dim_vector() {
        return Err(Error::Consistency("torsion sequence is not exact".into()));
    }
    let ops = abelian_ops(&quot_proj)?;
    if !ops.cokernel.is_zero() || ops.kernel.dim_vector() != sub.dim_vector() {
        return Err(Error::Consistency("torsion sequence is not exact".into()));
    }
    Ok(TorsionPair { sub, sub_incl, quot, quot_proj })
}

/// `0 -> P1 -> P0 -> Z -> 0`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub p1: ObjRef,
    pub p0: ObjRef,
    pub d1: TripleMorphism,
    pub d0: TripleMorphism,
}

/// `P1 = (F(Y),0,0)`, `P0 = (X,0,0) ⊕ E(Y)`, `d1 = (eta, incl)`, `d0 = f - mu`.
pub fn projective_resolution(z: &ObjRef) -> Result<Resolution> {
    let s = z.scenario();
    let p1 = Arc::new(fy_object(s, z.y()));
    let xz = Arc::new(z.x_part());
    let e = Arc::new(universal_extension(s, z.y()));
    let p0 = direct_sum(&xz, &e)?.object;
    let nx = s.x_vertices().len();
    let d1u = (0..nx)
        .map(|i| z.eta()[i].vstack(&RatMatrix::identity(z.fy_dim(i))))
        .collect();
    let d1v = z.y().modules().iter().map(|m| RatMatrix::zeros(m.dim(), 0)).collect();
    let d1 = TripleMorphism::new(p1.clone(), p0.clone(), d1u, d1v)?;
    let d0u = (0..nx)
        .map(|i| RatMatrix::identity(z.x_dim(i)).hstack(&z.eta()[i].scale(&-Q::one())))
        .collect();
    let d0v = z.y().modules().iter().map(|m| RatMatrix::identity(m.dim()).scale(&-Q::one())).collect();
    let d0 = TripleMorphism::new(p0.clone(), z.clone(), d0u, d0v)?;
    let res = Resolution { p1, p0, d1, d0 };
    res.verify()?;
    Ok(res)
}

impl Resolution {
    fn verify(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Consistency(format!("projective resolution: {what}")));
        if !self.d0.after(&self.d1).is_zero() {
            return fail("d0 d1 != 0");
        }
        let o1 = abelian_ops(&self.d1)?;
        if !o1.kernel.is_zero() {
            return fail("d1 not injective");
        }
        let o0 = abelian_ops(&self.d0)?;
        if !o0.cokernel.is_zero() {
            return fail("d0 not surjective");
        }
        if o0.kernel.dim_vector() != o1.image.dim_vector() || o0.kernel.total_dim() != self.p1.total_dim() {
            return fail("not exact at P0");
        }
        if !is_projective(&self.p0) || !is_projective(&self.p1) {
            return fail("terms are not projective");
        }
        Ok(())
    }
}

/// True iff every component of `eta` is injective.
pub fn is_projective(z: &TripleObject) -> bool {
    z.eta().iter().all(|e| e.rank() == e.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::extcat::{ext1, hom};

    #[test]
    fn identity_and_zero_maps() {
        let s = Arc::new(catalog::get("c2").unwrap());
        let e = Arc::new(universal_extension(&s, TripleObject::simple_y(&s, 0).y()));
        let id = TripleMorphism::identity(&e);
        let ops = abelian_ops(&id).unwrap();
        assert!(ops.kernel.is_zero() && ops.cokernel.is_zero());
        assert_eq!(ops.image.dim_vector(), e.dim_vector());
        let zero = TripleMorphism::zero(&e, &e);
        let ops = abelian_ops(&zero).unwrap();
        assert!(ops.image.is_zero());
        assert_eq!(ops.kernel.dim_vector(), e.dim_vector());
    }

    #[test]
    fn torsion_pair_of_universal_extension() {
        let s = Arc::new(catalog::get("two_surfaces").unwrap());
        let e = Arc::new(universal_extension(&s, TripleObject::simple_y(&s, 0).y()));
        let tp = torsion_pair(&e).unwrap();
        assert_eq!(tp.sub.x_dim(0), 2);
        assert_eq!(tp.quot.y_dim(0), 1);
        let ops = abelian_ops(&tp.sub_incl).unwrap();
        assert_eq!(ops.cokernel.dim_vector(), tp.quot.dim_vector());
    }

    #[test]
    fn resolutions_of_special_objects() {
        let s = Arc::new(catalog::get("a2").unwrap());
        let sy = Arc::new(TripleObject::simple_y(&s, 0));
        let r = projective_resolution(&sy).unwrap();
        assert_eq!(r.p1.x_dim(0), 1);
        assert!(!is_projective(&sy));
        assert_eq!(ext1(&sy, &Arc::new(TripleObject::simple_x(&s, 0))).unwrap().dim, 1);
        let sx = Arc::new(TripleObject::simple_x(&s, 0));
        let r = projective_resolution(&sx).unwrap();
        assert!(r.p1.is_zero());
        assert_eq!(r.p0.dim_vector(), sx.dim_vector());
        // E(Y): d1 is a split mono
        let e = Arc::new(universal_extension(&s, sy.y()));
        let r = projective_resolution(&e).unwrap();
        let back = hom(&r.p0, &r.p1).unwrap();
        assert!(back.iter().any(|g| g.after(&r.d1).is_iso()));
    }
}
