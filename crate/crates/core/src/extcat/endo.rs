//! Endomorphism algebras, universal objects, decomposition and isomorphism search.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{factor_rational, is_irreducible, AlgebraSpec, Polynomial, RatMatrix, SpanCoords, Q};

use super::abelian::sub_object;
use super::homext::{equivariant_maps, ext1, hom};
use super::object::{ObjRef, TripleMorphism, TripleObject};

/// `End(z)` with its basis of morphisms.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub algebra: AlgebraSpec,
    pub basis: Vec<TripleMorphism>,
}

impl EndAlgebra {
    /// The endomorphism with the given coordinates.
    pub fn element(&self, z: &ObjRef, c: &[Q]) -> TripleMorphism {
        let mut acc = TripleMorphism::zero(z, z);
        for (b, x) in self.basis.iter().zip(c) {
            if !x.is_zero() {
                acc = acc.add(&b.scale(x));
            }
        }
        acc
    }
}

/// Structure constants of `hom(z, z)` under composition, `e_i e_j = e_i ∘ e_j`.
pub fn end_algebra(z: &ObjRef) -> Result<EndAlgebra> {
    let basis = hom(z, z)?;
    let flat: Vec<Vec<Q>> = basis.iter().map(TripleMorphism::flatten).collect();
    let len = flat.first().map_or(0, Vec::len);
    let sc = SpanCoords::new(len, &flat);
    let d = basis.len();
    let mut constants = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            constants[i][j] = sc
                .coords(&basis[i].after(&basis[j]).flatten())
                .ok_or_else(|| Error::Consistency("composite of endomorphisms left End".into()))?;
        }
    }
    let unit = if d == 0 {
        Vec::new()
    } else {
        sc.coords(&TripleMorphism::identity(z).flatten())
            .ok_or_else(|| Error::Consistency("identity missing from End".into()))?
    };
    let labels = (0..d).map(|i| format!("f{i}")).collect();
    let algebra = if d == 0 { zero_algebra() } else { AlgebraSpec::new(labels, constants, unit)? };
    Ok(EndAlgebra { algebra, basis })
}

fn zero_algebra() -> AlgebraSpec {
    AlgebraSpec::product(&[])
}

/// `End_Y(Y)` as an algebra of families `(v_y)`.
fn y_end_basis(z: &TripleObject) -> Vec<Vec<RatMatrix>> {
    let ny = z.y().modules().len();
    let mut out = Vec::new();
    for j in 0..ny {
        let m = &z.y().modules()[j];
        for b in equivariant_maps(m, m) {
            let mut fam: Vec<RatMatrix> =
                z.y().modules().iter().map(|w| RatMatrix::zeros(w.dim(), w.dim())).collect();
            fam[j] = b;
            out.push(fam);
        }
    }
    out
}

fn flat_family(f: &[RatMatrix]) -> Vec<Q> {
    f.iter().flat_map(|m| m.data().iter().cloned()).collect()
}

/// Whether `f -> f.v` is an algebra isomorphism `End(z) -> End_Y(Y)`.
pub fn end_restriction_is_iso(z: &ObjRef) -> Result<bool> {
    let end = end_algebra(z)?;
    let yb = y_end_basis(z);
    if yb.len() != end.basis.len() {
        return Ok(false);
    }
    if yb.is_empty() {
        return Ok(true);
    }
    let flat: Vec<Vec<Q>> = yb.iter().map(|f| flat_family(f)).collect();
    let sc = SpanCoords::new(flat[0].len(), &flat);
    let images: Vec<Vec<Q>> = end
        .basis
        .iter()
        .map(|f| sc.coords(&flat_family(f.v())).expect("v-part is equivariant"))
        .collect();
    let t = RatMatrix::from_columns(yb.len(), &images);
    if !t.is_invertible() {
        return Ok(false);
    }
    // T(e_i e_j) = T(e_i) T(e_j), computed in End_Y coordinates
    for i in 0..yb.len() {
        for j in 0..yb.len() {
            let lhs = t.mul_vec(&end.algebra.constants()[i][j]);
            let prod: Vec<RatMatrix> = end.basis[i].v().iter().zip(end.basis[j].v()).map(|(a, b)| a * b).collect();
            if sc.coords(&flat_family(&prod)).as_deref() != Some(&lhs[..]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of the universality test with each characterization reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalVerdict {
    pub universal: bool,
    /// every `eta_x` is an isomorphism
    pub eta_iso: bool,
    /// `End(z) -> End(Y)` is an isomorphism and `Ext^1(z, z) = 0`
    pub end_and_self_ext: bool,
    /// `Hom(z, X') = 0 = Ext^1(z, X')` for all `X'` in the x-side
    pub orthogonal_to_x: bool,
    /// Every x-vertex where `F(Y)` is nonzero also carries some of `X`.
    /// Without this the End/Ext condition does not force `eta` to be
    /// injective: `(0, Y, 0)` satisfies it whenever `Ext^1(Y, Y) = 0`.
    pub end_criterion_applies: bool,
}

/// Decides whether `z ≅ E(Y)`, computing three equivalent conditions independently.
pub fn is_universal(z: &ObjRef) -> Result<UniversalVerdict> {
    let s = z.scenario();
    let eta_iso = z.eta().iter().all(RatMatrix::is_invertible);
    let end_and_self_ext = end_restriction_is_iso(z)? && ext1(z, z)?.dim == 0;
    let mut orthogonal_to_x = true;
    for x in 0..s.x_vertices().len() {
        let sx = Arc::new(TripleObject::simple_x(s, x));
        if !hom(z, &sx)?.is_empty() || ext1(z, &sx)?.dim != 0 {
            orthogonal_to_x = false;
            break;
        }
    }
    let end_criterion_applies = (0..s.x_vertices().len()).all(|x| z.x_dim(x) > 0 || z.fy_dim(x) == 0);
    let end_disagrees = (eta_iso && !end_and_self_ext) || (end_criterion_applies && end_and_self_ext && !eta_iso);
    if end_disagrees || eta_iso != orthogonal_to_x {
        return Err(Error::Consistency(format!(
            "universality criteria disagree: eta iso {eta_iso}, End/Ext {end_and_self_ext}, orthogonality {orthogonal_to_x}"
        )));
    }
    Ok(UniversalVerdict { universal: eta_iso, eta_iso, end_and_self_ext, orthogonal_to_x, end_criterion_applies })
}

/// A direct summand of a decomposed object.
#[derive(Clone, Debug)]
pub struct Summand {
    pub object: ObjRef,
    pub inclusion: TripleMorphism,
    pub projection: TripleMorphism,
    /// `End/rad` was shown to be a field.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

impl Decomposition {
    /// Every leaf certified indecomposable.
    pub fn certified(&self) -> bool {
        self.summands.iter().all(|s| s.certified)
    }

    pub fn flag(&self) -> &'static str {
        if self.certified() {
            "certified"
        } else {
            "no-further-splitting-found"
        }
    }

    pub fn dim_vectors(&self) -> Vec<Vec<usize>> {
        self.summands.iter().map(|s| s.object.dim_vector()).collect()
    }

    /// Checks `p_i i_j = delta_ij`, `e_i^2 = e_i` and `sum e_i = id`.
    pub fn verify(&self, z: &ObjRef) -> Result<()> {
        let fail = |w: &str| Err(Error::Consistency(format!("decomposition: {w}")));
        let mut sum = TripleMorphism::zero(z, z);
        for (i, a) in self.summands.iter().enumerate() {
            for (j, b) in self.summands.iter().enumerate() {
                let c = a.projection.after(&b.inclusion);
                if (i == j && !c.is_identity()) || (i != j && !c.is_zero()) {
                    return fail("p_i i_j != delta_ij");
                }
            }
            let e = a.inclusion.after(&a.projection);
            if e.after(&e) != e {
                return fail("e^2 != e");
            }
            sum = sum.add(&e);
        }
        if !sum.is_identity() && !z.is_zero() {
            return fail("sum of idempotents is not the identity");
        }
        Ok(())
    }
}

/// Splits `z` into summands via Fitting and CRT idempotents of `End(z)`.
pub fn decompose(z: &ObjRef) -> Result<Decomposition> {
    let summands = split(z)?;
    let d = Decomposition { summands };
    d.verify(z)?;
    Ok(d)
}

enum Step {
    Leaf(bool),
    Split(TripleMorphism),
}

fn split(z: &ObjRef) -> Result<Vec<Summand>> {
    if z.is_zero() {
        return Ok(Vec::new());
    }
    match analyse(z)? {
        Step::Leaf(certified) => Ok(vec![Summand {
            object: z.clone(),
            inclusion: TripleMorphism::identity(z),
            projection: TripleMorphism::identity(z),
            certified,
        }]),
        Step::Split(e) => {
            let one = TripleMorphism::identity(z);
            let f = one.add(&e.scale(&-Q::one()));
            let mut out = Vec::new();
            for idem in [e, f] {
                let xs: Vec<RatMatrix> =
                    idem.u().iter().map(|m| RatMatrix::from_columns(m.rows(), &m.column_space_basis())).collect();
                let ys: Vec<RatMatrix> =
                    idem.v().iter().map(|m| RatMatrix::from_columns(m.rows(), &m.column_space_basis())).collect();
                let (part, incl) = sub_object(z, &xs, &ys)?;
                let pu = xs.iter().zip(idem.u()).map(|(b, m)| b.solve_matrix(m).expect("e lands in im e")).collect();
                let pv = ys.iter().zip(idem.v()).map(|(b, m)| b.solve_matrix(m).expect("e lands in im e")).collect();
                let proj = TripleMorphism::new_unchecked(z.clone(), part.clone(), pu, pv);
                for leaf in split(&part)? {
                    out.push(Summand {
                        object: leaf.object,
                        inclusion: incl.after(&leaf.inclusion),
                        projection: leaf.projection.after(&proj),
                        certified: leaf.certified,
                    });
                }
            }
            Ok(out)
        }
    }
}

fn analyse(z: &ObjRef) -> Result<Step> {
    let end = end_algebra(z)?;
    let alg = &end.algebra;
    let d = alg.dim();
    if d == 1 {
        return Ok(Step::Leaf(true));
    }
    let rad = alg.radical();
    let (quot, proj) = alg.quotient(&rad)?;
    let qdim = quot.dim();
    if qdim == 1 {
        return Ok(Step::Leaf(true));
    }
    for a in alg.candidate_elements(3 * d + 16) {
        let mp = alg.min_poly(&a);
        let factors = factor_rational(&mp);
        if factors.len() >= 2 {
            // Coprime factorization mp = f g gives the idempotent t(a) g(a)
            // with s f + t g = 1. When f = t^k this is the Fitting splitting
            // z = ker(a^N) ⊕ im(a^N).
            let f = factors[0].poly.pow(factors[0].multiplicity);
            let (g, r) = mp.div_rem(&f);
            debug_assert!(r.is_zero());
            let (one, _s, t) = f.ext_gcd(&g);
            debug_assert!(one == Polynomial::one());
            let e = alg.eval_poly(&t.mul(&g), &a);
            let em = end.element(z, &e);
            if !em.is_zero() && !em.is_identity() {
                return Ok(Step::Split(em));
            }
        }
        // a local End has no nontrivial idempotents, so certifying ends the search
        if quot.is_commutative() {
            let mq = quot.min_poly(&proj.mul_vec(&a));
            if mq.degree() == Some(qdim) && is_irreducible(&mq) {
                return Ok(Step::Leaf(true));
            }
        }
    }
    Ok(Step::Leaf(false))
}

/// An isomorphism `a -> b`, if one is found among basis elements and
/// seeded random combinations of `Hom(a, b)`.
pub fn find_isomorphism(a: &ObjRef, b: &ObjRef) -> Result<Option<TripleMorphism>> {
    if a.dim_vector() != b.dim_vector() {
        return Ok(None);
    }
    if a.is_zero() {
        return Ok(Some(TripleMorphism::zero(a, b)));
    }
    let basis = hom(a, b)?;
    if basis.is_empty() {
        return Ok(None);
    }
    if let Some(f) = basis.iter().find(|f| f.is_iso()) {
        return Ok(Some(f.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..(2 * basis.len() + 8) {
        let mut f = TripleMorphism::zero(a, b);
        for g in &basis {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                f = f.add(&g.scale(&Q::from_integer(c.into())));
            }
        }
        if f.is_iso() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::extcat::{direct_sum, universal_extension};

    #[test]
    fn simple_object_end_is_vertex_algebra() {
        let s = Arc::new(catalog::get("g2_threefold").unwrap());
        let z = Arc::new(TripleObject::simple_y(&s, 0));
        let end = end_algebra(&z).unwrap();
        assert_eq!(end.algebra.dim(), 3);
        assert_eq!(end.algebra.center_basis().len(), 3);
        let dec = decompose(&z).unwrap();
        assert_eq!(dec.summands.len(), 1);
        assert!(dec.certified());
    }

    #[test]
    fn sum_of_x_simples_has_fourfold_end() {
        let s = Arc::new(catalog::get("c3_surface").unwrap());
        let w = Arc::new(TripleObject::simple_x(&s, 0));
        let ww = direct_sum(&w, &w).unwrap().object;
        assert_eq!(end_algebra(&ww).unwrap().algebra.dim(), 4 * end_algebra(&w).unwrap().algebra.dim());
        let dec = decompose(&ww).unwrap();
        assert_eq!(dec.summands.len(), 2);
        assert!(dec.certified());
    }

    #[test]
    fn sum_of_simples_at_distinct_vertices() {
        let s = Arc::new(catalog::get("c2").unwrap());
        let a = Arc::new(TripleObject::simple_x(&s, 0));
        let b = Arc::new(TripleObject::simple_y(&s, 0));
        let z = direct_sum(&a, &b).unwrap().object;
        let dec = decompose(&z).unwrap();
        let mut dv = dec.dim_vectors();
        dv.sort();
        assert_eq!(dv, vec![vec![0, 1], vec![1, 0]]);
        assert!(dec.certified());
    }

    #[test]
    fn universal_extension_is_universal() {
        for name in ["a2", "c2", "b2_dual", "g2_threefold", "two_surfaces"] {
            let s = Arc::new(catalog::get(name).unwrap());
            let e = Arc::new(universal_extension(&s, TripleObject::simple_y(&s, 0).y()));
            let v = is_universal(&e).unwrap();
            assert!(v.universal, "{name}");
            let x = Arc::new(TripleObject::simple_x(&s, 0));
            assert!(!is_universal(&x).unwrap().universal);
        }
    }

    #[test]
    fn rescaled_eta_is_still_universal() {
        let s = Arc::new(catalog::get("two_surfaces").unwrap());
        let e = universal_extension(&s, TripleObject::simple_y(&s, 0).y());
        let eta = vec![RatMatrix::from_i64(2, 2, &[2, 1, 0, 3])];
        let z = Arc::new(TripleObject::new(s.clone(), e.x().to_vec(), e.y().clone(), eta).unwrap());
        assert!(is_universal(&z).unwrap().universal);
        let e = Arc::new(e);
        assert!(find_isomorphism(&z, &e).unwrap().is_some());
    }

    #[test]
    fn y_simple_is_exceptional_but_not_universal() {
        // End(S_y) = End(Y) and Ext^1(S_y, S_y) = 0, yet S_y is not E(Y)
        let s = Arc::new(catalog::get("a2").unwrap());
        let z = Arc::new(TripleObject::simple_y(&s, 0));
        let v = is_universal(&z).unwrap();
        assert!(!v.universal && v.end_and_self_ext && !v.end_criterion_applies);
    }
}
