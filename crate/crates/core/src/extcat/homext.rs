//! Hom spaces, `Ext^1` and the Euler form.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{quotient_space, RatMatrix, SpanCoords, Q};

use super::object::{fy_action, fy_dim, tensor_map, ObjRef, TripleMorphism, VertexModule};

/// Basis of equivariant linear maps `a -> b` between modules over the same algebra.
pub fn equivariant_maps(a: &VertexModule, b: &VertexModule) -> Vec<RatMatrix> {
    equivariant_maps_raw(a.action(), a.dim(), b.action(), b.dim())
}

pub(crate) fn equivariant_maps_raw(la: &[RatMatrix], da: usize, lb: &[RatMatrix], db: usize) -> Vec<RatMatrix> {
    let n = da * db;
    if n == 0 {
        return Vec::new();
    }
    let mut rows = Vec::new();
    for (a, b) in la.iter().zip(lb) {
        push_commutation_rows(&mut rows, a, b, da, db, 0, n);
    }
    RatMatrix::from_rows(n, rows)
        .kernel_basis()
        .into_iter()
        .map(|v| RatMatrix::from_vec(db, da, v))
        .collect()
}

/// Rows of `u a - b u = 0` for the unknown `db x da` block `u` stored row-major at `off`.
fn push_commutation_rows(rows: &mut Vec<Vec<Q>>, a: &RatMatrix, b: &RatMatrix, da: usize, db: usize, off: usize, n: usize) {
    for r in 0..db {
        for c in 0..da {
            let mut row = vec![Q::zero(); n];
            let mut any = false;
            for k in 0..da {
                let v = a.get(k, c);
                if !v.is_zero() {
                    row[off + r * da + k] += v;
                    any = true;
                }
            }
            for k in 0..db {
                let v = b.get(r, k);
                if !v.is_zero() {
                    row[off + k * da + c] -= v;
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
}

/// Basis of `Hom(a, b)`.
///
/// Solves for all components of `(u, v)` at once: equivariance at every
/// vertex plus the compatibility square at every x-vertex.
pub fn hom(a: &ObjRef, b: &ObjRef) -> Result<Vec<TripleMorphism>> {
    if a.scenario() != b.scenario() {
        return Err(Error::ScenarioMismatch(a.scenario().name().into(), b.scenario().name().into()));
    }
    let s = &**a.scenario();
    let nx = s.x_vertices().len();
    let ny = s.y_vertices().len();
    let mut offs_u = Vec::new();
    let mut n = 0;
    for i in 0..nx {
        offs_u.push(n);
        n += a.x_dim(i) * b.x_dim(i);
    }
    let mut offs_v = Vec::new();
    for j in 0..ny {
        offs_v.push(n);
        n += a.y_dim(j) * b.y_dim(j);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    for i in 0..nx {
        let (ma, mb) = (&a.x()[i], &b.x()[i]);
        for (la, lb) in ma.action().iter().zip(mb.action()) {
            push_commutation_rows(&mut rows, la, lb, ma.dim(), mb.dim(), offs_u[i], n);
        }
    }
    for j in 0..ny {
        let (ma, mb) = (&a.y().modules()[j], &b.y().modules()[j]);
        for (la, lb) in ma.action().iter().zip(mb.action()) {
            push_commutation_rows(&mut rows, la, lb, ma.dim(), mb.dim(), offs_v[j], n);
        }
    }
    // u_x eta_x - eta'_x F(v)_x = 0
    for i in 0..nx {
        let (da, db) = (a.x_dim(i), b.x_dim(i));
        let fa = a.fy_dim(i);
        if db == 0 || fa == 0 {
            continue;
        }
        let eta = &a.eta()[i];
        let eta2 = &b.eta()[i];
        // contribution of each elementary v-entry: -(eta' F(E_pq))
        let mut contrib: Vec<(usize, RatMatrix)> = Vec::new();
        for j in 0..ny {
            if s.bimodule(i, j).is_none() {
                continue;
            }
            let (dya, dyb) = (a.y_dim(j), b.y_dim(j));
            for p in 0..dyb {
                for qd in 0..dya {
                    let mut v: Vec<RatMatrix> =
                        (0..ny).map(|t| RatMatrix::zeros(b.y_dim(t), a.y_dim(t))).collect();
                    v[j].set(p, qd, Q::one());
                    let fv = tensor_map(s, i, a.y(), b.y(), &v);
                    let m = eta2 * &fv;
                    if !m.is_zero() {
                        contrib.push((offs_v[j] + p * dya + qd, m));
                    }
                }
            }
        }
        for r in 0..db {
            for c in 0..fa {
                let mut row = vec![Q::zero(); n];
                for k in 0..da {
                    let e = eta.get(k, c);
                    if !e.is_zero() {
                        row[offs_u[i] + r * da + k] += e;
                    }
                }
                for (idx, m) in &contrib {
                    let e = m.get(r, c);
                    if !e.is_zero() {
                        row[*idx] -= e;
                    }
                }
                rows.push(row);
            }
        }
    }
    let kernel = RatMatrix::from_rows(n, rows).kernel_basis();
    Ok(kernel.into_iter().map(|v| TripleMorphism::from_flat(a, b, &v)).collect())
}

pub fn hom_dim(a: &ObjRef, b: &ObjRef) -> Result<usize> {
    Ok(hom(a, b)?.len())
}

/// `Ext^1(a, b)` as the cokernel of
/// `psi : Hom(X, X') ⊕ Hom(Y, Y') -> Hom_{D_x}(F(Y), X')`,
/// `(u, v) -> u eta - eta' F(v)`.
#[derive(Clone, Debug)]
pub struct ExtResult {
    pub dim: usize,
    /// Coset representatives: per basis class, one map `F(Y)_x -> X'_x` per x-vertex.
    pub basis: Vec<Vec<RatMatrix>>,
    /// `dim Hom(X, X') + dim Hom(Y, Y')`.
    pub psi_domain_dim: usize,
    /// `dim Hom_{D_x}(F(Y), X')`.
    pub psi_codomain_dim: usize,
    pub psi_rank: usize,
    target_coords: Vec<(SpanCoords, usize)>,
    projection: RatMatrix,
}

impl ExtResult {
    /// Class of a family of equivariant maps `F(Y)_x -> X'_x` in the chosen
    /// coordinates; `None` if some component is not equivariant.
    pub fn class_of(&self, maps: &[RatMatrix]) -> Option<Vec<Q>> {
        let mut c = Vec::new();
        for ((sc, _), m) in self.target_coords.iter().zip(maps) {
            c.extend(sc.coords(m.data())?);
        }
        Some(self.projection.mul_vec(&c))
    }
}

pub fn ext1(a: &ObjRef, b: &ObjRef) -> Result<ExtResult> {
    if a.scenario() != b.scenario() {
        return Err(Error::ScenarioMismatch(a.scenario().name().into(), b.scenario().name().into()));
    }
    let s = &**a.scenario();
    let nx = s.x_vertices().len();
    let ny = s.y_vertices().len();
    let hx: Vec<Vec<RatMatrix>> = (0..nx).map(|i| equivariant_maps(&a.x()[i], &b.x()[i])).collect();
    let hy: Vec<Vec<RatMatrix>> =
        (0..ny).map(|j| equivariant_maps(&a.y().modules()[j], &b.y().modules()[j])).collect();
    let mut target_coords = Vec::new();
    let mut t_bases = Vec::new();
    let mut t_off = Vec::new();
    let mut dim_t = 0;
    for i in 0..nx {
        let fa = fy_dim(s, a.y(), i);
        let t = equivariant_maps_raw(&fy_action(s, a.y(), i), fa, b.x()[i].action(), b.x_dim(i));
        let flat: Vec<Vec<Q>> = t.iter().map(|m| m.to_vec()).collect();
        target_coords.push((SpanCoords::new(fa * b.x_dim(i), &flat), t.len()));
        t_off.push(dim_t);
        dim_t += t.len();
        t_bases.push(t);
    }
    let coords_of = |maps: &[RatMatrix]| -> Vec<Q> {
        let mut c = Vec::with_capacity(dim_t);
        for ((sc, _), m) in target_coords.iter().zip(maps) {
            c.extend(sc.coords(m.data()).expect("psi lands in equivariant maps"));
        }
        c
    };
    let mut columns = Vec::new();
    for i in 0..nx {
        for u in &hx[i] {
            let maps: Vec<RatMatrix> = (0..nx)
                .map(|k| if k == i { u * &a.eta()[i] } else { RatMatrix::zeros(b.x_dim(k), a.fy_dim(k)) })
                .collect();
            columns.push(coords_of(&maps));
        }
    }
    for j in 0..ny {
        for vj in &hy[j] {
            let mut v: Vec<RatMatrix> = (0..ny).map(|t| RatMatrix::zeros(b.y_dim(t), a.y_dim(t))).collect();
            v[j] = vj.clone();
            let maps: Vec<RatMatrix> = (0..nx)
                .map(|k| {
                    let fv = tensor_map(s, k, a.y(), b.y(), &v);
                    (&b.eta()[k] * &fv).scale(&-Q::one())
                })
                .collect();
            columns.push(coords_of(&maps));
        }
    }
    let psi_domain_dim = columns.len();
    let psi = RatMatrix::from_columns(dim_t, &columns);
    let image = psi.column_space_basis();
    let psi_rank = image.len();
    let (dim, projection) = quotient_space(dim_t, &image);
    let section = projection
        .solve_matrix(&RatMatrix::identity(dim))
        .expect("quotient projection has full row rank");
    let basis = (0..dim)
        .map(|c| {
            let col = section.column(c);
            (0..nx)
                .map(|i| {
                    let mut m = RatMatrix::zeros(b.x_dim(i), a.fy_dim(i));
                    for (k, tb) in t_bases[i].iter().enumerate() {
                        let coef = &col[t_off[i] + k];
                        if !coef.is_zero() {
                            m = &m + &tb.scale(coef);
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();
    Ok(ExtResult {
        dim,
        basis,
        psi_domain_dim,
        psi_codomain_dim: dim_t,
        psi_rank,
        target_coords,
        projection,
    })
}

/// `dim Hom(a, b) - dim Ext^1(a, b)`, cross-checked against
/// `dim Hom(X, X') + dim Hom(Y, Y') - dim Hom(F(Y), X')`.
pub fn euler_form(a: &ObjRef, b: &ObjRef) -> Result<i64> {
    let h = hom(a, b)?.len() as i64;
    let e = ext1(a, b)?;
    let lhs = h - e.dim as i64;
    let rhs = e.psi_domain_dim as i64 - e.psi_codomain_dim as i64;
    if lhs != rhs {
        return Err(Error::Consistency(format!(
            "euler form mismatch: dim Hom - dim Ext = {lhs}, dimension count = {rhs}"
        )));
    }
    Ok(lhs)
}
