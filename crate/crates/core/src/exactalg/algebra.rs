//! Finite-dimensional associative unital algebras over the rationals.

use num_traits::{One, Zero};

use super::matrix::{quotient_space, RatMatrix, SpanCoords};
use super::poly::Polynomial;
use super::{q, Q};
use crate::error::{Error, Result};

/// Structure constants `e_i * e_j = sum_k c[i][j][k] e_k` plus a unit vector.
///
/// Validation (associativity on all basis triples, unit laws) happens in
/// [`AlgebraSpec::new`]; an `AlgebraSpec` value is always valid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    labels: Vec<String>,
    constants: Vec<Vec<Vec<Q>>>,
    unit: Vec<Q>,
}

impl AlgebraSpec {
    pub fn new(labels: Vec<String>, constants: Vec<Vec<Vec<Q>>>, unit: Vec<Q>) -> Result<Self> {
        let n = labels.len();
        if constants.len() != n
            || constants.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n))
        {
            return Err(Error::InvalidAlgebra(format!("structure constants must be {n}x{n}x{n}")));
        }
        if unit.len() != n {
            return Err(Error::InvalidAlgebra(format!("unit must have {n} coordinates")));
        }
        let alg = AlgebraSpec { labels, constants, unit };
        alg.check_unit()?;
        alg.check_associative()?;
        Ok(alg)
    }

    fn check_unit(&self) -> Result<()> {
        for i in 0..self.dim() {
            let e = self.basis_vector(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::InvalidAlgebra(format!(
                    "unit law fails on basis element {}",
                    self.labels[i]
                )));
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        // L(e_i e_j) = L(e_i) L(e_j) is associativity on all triples
        let lm: Vec<RatMatrix> = (0..self.dim()).map(|i| self.left_mul_basis(i)).collect();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let prod = &lm[i] * &lm[j];
                let mut expect = RatMatrix::zeros(self.dim(), self.dim());
                for (k, c) in self.constants[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        expect = &expect + &lm[k].scale(c);
                    }
                }
                if prod != expect {
                    return Err(Error::InvalidAlgebra(format!(
                        "associativity fails: (e{i} e{j}) e_k != e{i} (e{j} e_k) for some k"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The rationals as a one-dimensional algebra.
    pub fn rationals() -> Self {
        AlgebraSpec { labels: vec!["1".into()], constants: vec![vec![vec![Q::one()]]], unit: vec![Q::one()] }
    }

    /// `Q[t]/(m)` in the power basis `1, t, ..., t^{n-1}`; `m` need not be irreducible.
    pub fn from_minpoly(m: &Polynomial) -> Result<Self> {
        let n = m.degree().filter(|&d| d >= 1).ok_or_else(|| {
            Error::InvalidAlgebra("defining polynomial must have degree >= 1".into())
        })?;
        let m = m.monic();
        let reduce = |k: usize| -> Vec<Q> {
            let (_, r) = Polynomial::monomial(Q::one(), k).div_rem(&m);
            let mut v = r.coeffs().to_vec();
            v.resize(n, Q::zero());
            v
        };
        let constants = (0..n).map(|i| (0..n).map(|j| reduce(i + j)).collect()).collect();
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            })
            .collect();
        let mut unit = vec![Q::zero(); n];
        unit[0] = Q::one();
        AlgebraSpec::new(labels, constants, unit)
    }

    /// Full matrix algebra `M_n(Q)` with basis `E_{ab}` in row-major order.
    pub fn matrix_algebra(n: usize) -> Self {
        Self::matrix_subalgebra(n, &(0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect::<Vec<_>>())
            .expect("full matrix algebra is valid")
    }

    /// Upper-triangular `n x n` matrices.
    pub fn upper_triangular(n: usize) -> Self {
        Self::matrix_subalgebra(n, &(0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect::<Vec<_>>())
            .expect("upper triangular algebra is valid")
    }

    fn matrix_subalgebra(n: usize, units: &[(usize, usize)]) -> Result<Self> {
        let d = units.len();
        let index = |a: usize, b: usize| units.iter().position(|&u| u == (a, b));
        let mut constants = vec![vec![vec![Q::zero(); d]; d]; d];
        for (i, &(a, b)) in units.iter().enumerate() {
            for (j, &(c, e)) in units.iter().enumerate() {
                if b == c {
                    let k = index(a, e).ok_or_else(|| Error::InvalidAlgebra("not closed".into()))?;
                    constants[i][j][k] = Q::one();
                }
            }
        }
        let mut unit = vec![Q::zero(); d];
        for a in 0..n {
            let k = index(a, a).ok_or_else(|| Error::InvalidAlgebra("missing diagonal unit".into()))?;
            unit[k] = Q::one();
        }
        let labels = units.iter().map(|(a, b)| format!("E{a}{b}")).collect();
        AlgebraSpec::new(labels, constants, unit)
    }

    /// Direct product `A x B` with basis the disjoint union of bases.
    pub fn product(parts: &[AlgebraSpec]) -> Self {
        let d: usize = parts.iter().map(|p| p.dim()).sum();
        let mut constants = vec![vec![vec![Q::zero(); d]; d]; d];
        let mut unit = Vec::with_capacity(d);
        let mut labels = Vec::with_capacity(d);
        let mut off = 0;
        for (pi, p) in parts.iter().enumerate() {
            for i in 0..p.dim() {
                for j in 0..p.dim() {
                    for k in 0..p.dim() {
                        constants[off + i][off + j][off + k] = p.constants[i][j][k].clone();
                    }
                }
                labels.push(format!("{}#{pi}", p.labels[i]));
            }
            unit.extend(p.unit.iter().cloned());
            off += p.dim();
        }
        AlgebraSpec { labels, constants, unit }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constants(&self) -> &[Vec<Vec<Q>>] {
        &self.constants
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    pub fn zero(&self) -> Vec<Q> {
        vec![Q::zero(); self.dim()]
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (k, c) in self.constants[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[Q], k: usize) -> Vec<Q> {
        (0..k).fold(self.unit.clone(), |acc, _| self.mul(&acc, a))
    }

    /// Matrix of `x -> e_i x` in the basis.
    pub fn left_mul_basis(&self, i: usize) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m.set(k, j, self.constants[i][j][k].clone());
            }
        }
        m
    }

    /// Matrix of `x -> a x`.
    pub fn left_mul(&self, a: &[Q]) -> RatMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim()).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        RatMatrix::from_columns(self.dim(), &cols)
    }

    /// Matrix of `x -> x a`.
    pub fn right_mul(&self, a: &[Q]) -> RatMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim()).map(|j| self.mul(&self.basis_vector(j), a)).collect();
        RatMatrix::from_columns(self.dim(), &cols)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.constants[i][j] == self.constants[j][i]))
    }

    /// Evaluates a polynomial at an element (Horner).
    pub fn eval_poly(&self, p: &Polynomial, a: &[Q]) -> Vec<Q> {
        p.coeffs().iter().rev().fold(self.zero(), |acc, c| {
            let mut v = self.mul(&acc, a);
            for (x, u) in v.iter_mut().zip(&self.unit) {
                *x += c * u;
            }
            v
        })
    }

    pub fn is_invertible(&self, a: &[Q]) -> bool {
        self.left_mul(a).is_invertible()
    }

    /// Monic polynomial of least degree vanishing at `a`.
    pub fn min_poly(&self, a: &[Q]) -> Polynomial {
        let mut powers = vec![self.unit.clone()];
        loop {
            let next = self.mul(powers.last().unwrap(), a);
            let m = RatMatrix::from_columns(self.dim(), &powers);
            if let Some(c) = m.solve(&next) {
                let mut coeffs: Vec<Q> = c.into_iter().map(|x| -x).collect();
                coeffs.push(Q::one());
                return Polynomial::new(coeffs);
            }
            powers.push(next);
        }
    }

    /// Jacobson radical via the trace form: `{ x : tr L(x y) = 0 for all y }`.
    ///
    /// Correct in characteristic zero only.
    pub fn radical(&self) -> Vec<Vec<Q>> {
        let n = self.dim();
        let traces: Vec<Q> = (0..n).map(|k| self.left_mul_basis(k).trace()).collect();
        // gram[i][j] = tr L(e_i e_j) = sum_k c_ijk tr L(e_k)
        let mut gram = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut t = Q::zero();
                for (k, c) in self.constants[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        t += c * &traces[k];
                    }
                }
                gram.set(j, i, t);
            }
        }
        gram.kernel_basis()
    }

    /// Basis of `{ z : z e_i = e_i z for all i }`.
    pub fn center_basis(&self) -> Vec<Vec<Q>> {
        let n = self.dim();
        let mut rows = Vec::new();
        for i in 0..n {
            // (z e_i - e_i z)_k = sum_j z_j (c_jik - c_ijk)
            for k in 0..n {
                rows.push((0..n).map(|j| &self.constants[j][i][k] - &self.constants[i][j][k]).collect());
            }
        }
        RatMatrix::from_rows(n, rows).kernel_basis()
    }

    /// The center, as an algebra with induced structure constants.
    pub fn center(&self) -> AlgebraSpec {
        self.subalgebra(&self.center_basis()).expect("the center is a unital subalgebra")
    }

    /// Subalgebra spanned by `basis` (must contain the unit and be closed under products).
    pub fn subalgebra(&self, basis: &[Vec<Q>]) -> Result<AlgebraSpec> {
        let sc = SpanCoords::new(self.dim(), basis);
        let d = basis.len();
        let mut constants = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                constants[i][j] = sc
                    .coords(&self.mul(&basis[i], &basis[j]))
                    .ok_or_else(|| Error::InvalidAlgebra("subspace not closed under products".into()))?;
            }
        }
        let unit = sc
            .coords(&self.unit)
            .ok_or_else(|| Error::InvalidAlgebra("subspace does not contain the unit".into()))?;
        let labels = (0..d).map(|i| format!("z{i}")).collect();
        AlgebraSpec::new(labels, constants, unit)
    }

    /// Quotient by a two-sided ideal given by a basis.
    pub fn quotient(&self, ideal: &[Vec<Q>]) -> Result<(AlgebraSpec, RatMatrix)> {
        let (d, proj) = quotient_space(self.dim(), ideal);
        let section = proj
            .solve_matrix(&RatMatrix::identity(d))
            .expect("projection has full row rank");
        let lifts: Vec<Vec<Q>> = (0..d).map(|i| section.column(i)).collect();
        let mut constants = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                constants[i][j] = proj.mul_vec(&self.mul(&lifts[i], &lifts[j]));
            }
        }
        let unit = proj.mul_vec(&self.unit);
        let labels = (0..d).map(|i| format!("b{i}")).collect();
        Ok((AlgebraSpec::new(labels, constants, unit)?, proj))
    }

    /// Left regular representation matrices for each basis element.
    pub fn regular_rep(&self) -> Vec<RatMatrix> {
        (0..self.dim()).map(|i| self.left_mul_basis(i)).collect()
    }

    /// Right regular representation `x -> x e_i`, as matrices.
    pub fn right_regular_rep(&self) -> Vec<RatMatrix> {
        (0..self.dim()).map(|i| self.right_mul(&self.basis_vector(i))).collect()
    }

    /// A deterministic sequence of elements used as generic-element candidates.
    pub fn candidate_elements(&self, count: usize) -> Vec<Vec<Q>> {
        let n = self.dim();
        let mut out: Vec<Vec<Q>> = (0..n).map(|i| self.basis_vector(i)).collect();
        for k in 1..=count {
            out.push((0..n).map(|i| q(((i * 7 + k * 13 + i * i * k) % 11) as i64 - 5)).collect());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::factor_rational;

    fn dual_numbers() -> AlgebraSpec {
        AlgebraSpec::from_minpoly(&Polynomial::from_i64(&[0, 0, 1])).unwrap()
    }

    fn gaussian() -> AlgebraSpec {
        AlgebraSpec::from_minpoly(&Polynomial::from_i64(&[1, 0, 1])).unwrap()
    }

    fn split_etale() -> AlgebraSpec {
        AlgebraSpec::product(&[AlgebraSpec::rationals(), AlgebraSpec::rationals()])
    }

    #[test]
    fn min_poly_examples() {
        let g = gaussian();
        assert_eq!(g.min_poly(g.unit()), Polynomial::from_i64(&[-1, 1]));
        assert_eq!(g.min_poly(&g.basis_vector(1)), Polynomial::from_i64(&[1, 0, 1]));
        let d = dual_numbers();
        assert_eq!(d.min_poly(&d.basis_vector(1)), Polynomial::from_i64(&[0, 0, 1]));
    }

    #[test]
    fn radical_examples() {
        assert!(split_etale().radical().is_empty());
        let d = dual_numbers();
        let r = d.radical();
        assert_eq!(r.len(), 1);
        assert!(r[0][0].is_zero());
    }

    #[test]
    fn upper_triangular_radical_is_strict_part() {
        let u = AlgebraSpec::upper_triangular(2);
        let r = u.radical();
        assert_eq!(r.len(), 1);
        // oracle: nilpotent ideal and semisimple quotient
        let x = &r[0];
        assert!(u.mul(x, x).iter().all(Zero::is_zero));
        for i in 0..u.dim() {
            let e = u.basis_vector(i);
            let left = u.mul(&e, x);
            let right = u.mul(x, &e);
            let span = RatMatrix::from_columns(3, &[x.clone()]);
            assert!(span.solve(&left).is_some() && span.solve(&right).is_some());
        }
        let (quot, _) = u.quotient(&r).unwrap();
        assert_eq!(quot.dim(), 2);
        assert!(quot.radical().is_empty());
    }

    #[test]
    fn center_examples() {
        assert_eq!(gaussian().center().dim(), 2);
        assert_eq!(AlgebraSpec::matrix_algebra(2).center().dim(), 1);
        let c = AlgebraSpec::upper_triangular(2).center();
        assert_eq!(c.dim(), 1);
        assert!(c.is_commutative());
    }

    #[test]
    fn rejects_nonassociative_constants() {
        // basis 1, x, y with x*x = y, x*y = 1, y*x = 0, y*y = 0: (xx)x = 0 but x(xx) = 1
        let v = |a: i64, b: i64, c: i64| vec![q(a), q(b), q(c)];
        let unit_row = vec![v(1, 0, 0), v(0, 1, 0), v(0, 0, 1)];
        let constants = vec![
            unit_row,
            vec![v(0, 1, 0), v(0, 0, 1), v(1, 0, 0)],
            vec![v(0, 0, 1), v(0, 0, 0), v(0, 0, 0)],
        ];
        let labels = vec!["1".into(), "x".into(), "y".into()];
        let err = AlgebraSpec::new(labels, constants, v(1, 0, 0)).unwrap_err();
        assert!(err.to_string().contains("associativity"));
    }

    #[test]
    fn rejects_broken_unit() {
        let z = Q::zero;
        let o = Q::one;
        let constants = vec![vec![vec![o(), z()], vec![z(), o()]], vec![vec![z(), o()], vec![o(), o()]]];
        assert!(AlgebraSpec::new(vec!["1".into(), "x".into()], constants.clone(), vec![o(), z()]).is_ok());
        assert!(AlgebraSpec::new(vec!["1".into(), "x".into()], constants, vec![z(), o()]).is_err());
    }

    #[test]
    fn cubic_field_min_poly_is_irreducible() {
        let f = AlgebraSpec::from_minpoly(&Polynomial::from_i64(&[-1, -1, 0, 1])).unwrap();
        let p = f.min_poly(&f.basis_vector(1));
        assert_eq!(factor_rational(&p).len(), 1);
    }

    #[test]
    fn radical_is_nilpotent() {
        let u = AlgebraSpec::upper_triangular(3);
        let r = u.radical();
        assert_eq!(r.len(), 3);
        // any product of dim(u) radical elements vanishes
        let mut prod = r[0].clone();
        for k in 1..u.dim() {
            prod = u.mul(&prod, &r[k % r.len()]);
        }
        assert!(prod.iter().all(Zero::is_zero));
    }
}
