//! Dense matrices over the rationals with fraction-free elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{q, Q};

/// A dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        RatMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn scalar(n: usize, s: &Q) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Q>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        RatMatrix { rows: n, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = v.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::from_vec(rows, cols, entries.iter().map(|&e| q(e)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn data(&self) -> &[Q] {
        &self.data
    }

    /// Row-major flattening.
    pub fn to_vec(&self) -> Vec<Q> {
        self.data.clone()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Q) -> Self {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Q {
        assert!(self.is_square());
        (0..self.rows).fold(Q::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut m = Self::zeros(self.rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.data[r * cols + c] = self.get(r, c).clone();
            }
            for c in 0..other.cols {
                m.data[r * cols + self.cols + c] = other.get(r, c).clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(blocks: &[RatMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Copies `block` into `self` with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &RatMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = self.get(r0 + r, c0 + c).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend(self.row(r).iter().cloned());
        }
        RatMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (k, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + k] = self.get(r, c).clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let (rows, pivots) = echelon(self);
        let rank = pivots.len();
        let mut out: Vec<Vec<Q>> = rows
            .into_iter()
            .take(rank)
            .map(|row| row.into_iter().map(Q::from_integer).collect())
            .collect();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let p = out[r][pc].clone();
            if !p.is_one() {
                for v in out[r].iter_mut() {
                    if !v.is_zero() {
                        *v /= &p;
                    }
                }
            }
            let (above, rest) = out.split_at_mut(r);
            let pivot_row = &rest[0];
            for row in above.iter_mut() {
                let f = row[pc].clone();
                if f.is_zero() {
                    continue;
                }
                for (c, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        row[c] -= &f * pv;
                    }
                }
            }
        }
        out.resize(self.rows, vec![Q::zero(); self.cols]);
        (RatMatrix::from_rows(self.cols, out), pivots)
    }

    pub fn rank(&self) -> usize {
        echelon(self).1.len()
    }

    /// Basis of the null space `{ v : self * v = 0 }`.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                let e = r.get(row, free);
                if !e.is_zero() {
                    v[pc] = -e.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// A basis of the column space made of original columns.
    pub fn column_space_basis(&self) -> Vec<Vec<Q>> {
        let pivots = echelon(self).1;
        pivots.into_iter().map(|c| self.column(c)).collect()
    }

    /// Solves `self * X = rhs`; returns one solution (free variables zero) if consistent.
    pub fn solve_matrix(&self, rhs: &RatMatrix) -> Option<RatMatrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = RatMatrix::zeros(self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, r.get(row, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let rhs = RatMatrix::from_columns(self.rows, &[b.to_vec()]);
        self.solve_matrix(&rhs).map(|x| x.column(0))
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let inv = self.solve_matrix(&RatMatrix::identity(self.rows))?;
        if self.rank() == self.rows {
            Some(inv)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Exact determinant via Bareiss elimination.
    pub fn determinant(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Q::one();
        }
        let (mut rows, scale) = integer_rows(self);
        let mut prev = BigInt::one();
        let mut sign = 1i32;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !rows[i][k].is_zero()) else {
                return Q::zero();
            };
            if p != k {
                rows.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &rows[k][k] * &rows[i][j] - &rows[i][k] * &rows[k][j];
                    rows[i][j] = v / &prev;
                }
                rows[i][k] = BigInt::zero();
            }
            prev = rows[k][k].clone();
        }
        let det = Q::new(rows[n - 1][n - 1].clone(), scale);
        if sign < 0 {
            -det
        } else {
            det
        }
    }
}

/// Scales each row to integers. Returns the integer rows and the product of the scale factors.
fn integer_rows(m: &RatMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut total = BigInt::one();
    let rows = (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            total *= &l;
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    (rows, total)
}

/// Fraction-free (Bareiss) row echelon form over the integers.
fn echelon(m: &RatMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let (mut rows, _) = integer_rows(m);
    let n = m.rows;
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == n {
            break;
        }
        // smallest nonzero entry keeps the intermediate minors small
        let Some(p) = (r..n)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].abs())
        else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let f = row[c].clone();
            if f.is_zero() {
                if !prev.is_one() || !pv.is_one() {
                    for j in c + 1..m.cols {
                        if !row[j].is_zero() {
                            row[j] = &pv * &row[j] / &prev;
                        }
                    }
                }
                continue;
            }
            for j in c + 1..m.cols {
                let v = &pv * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }
    (rows, pivots)
}

/// Quotient of `Q^ambient` by the span of `subspace`.
///
/// Returns the quotient dimension and a projection matrix of full row rank
/// whose kernel is exactly the span of `subspace`.
pub fn quotient_space(ambient: usize, subspace: &[Vec<Q>]) -> (usize, RatMatrix) {
    if subspace.is_empty() {
        return (ambient, RatMatrix::identity(ambient));
    }
    // rows of the projection span the annihilator of the subspace
    let s = RatMatrix::from_rows(ambient, subspace.to_vec());
    let ann = s.kernel_basis();
    let dim = ann.len();
    (dim, RatMatrix::from_rows(ambient, ann))
}

/// Coordinates with respect to a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct SpanCoords {
    basis: RatMatrix,
    rows: Vec<usize>,
    inv: RatMatrix,
}

impl SpanCoords {
    /// `basis` must be linearly independent; vectors all of the same length.
    pub fn new(len: usize, basis: &[Vec<Q>]) -> Self {
        let b = RatMatrix::from_columns(len, basis);
        let (_, rows) = b.transpose().rref();
        assert_eq!(rows.len(), basis.len(), "SpanCoords basis must be independent");
        let inv = b.select_rows(&rows).inverse().expect("selected rows are independent");
        SpanCoords { basis: b, rows, inv }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        let sel: Vec<Q> = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.inv.mul_vec(&sel);
        if self.basis.mul_vec(&c) == v {
            Some(c)
        } else {
            None
        }
    }
}

impl<'a> Mul<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;

    fn mul(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;

    fn add(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<'a> Sub<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;

    fn sub(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;

    fn neg(self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, e: &[i64]) -> RatMatrix {
        RatMatrix::from_i64(rows, cols, e)
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        assert_eq!(RatMatrix::zeros(2, 2).kernel_basis().len(), 2);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(RatMatrix::identity(2).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = m(2, 2, &[1, 2, 2, 4]).kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (2, -1)
        assert_eq!(&k[0][0] * q(-1), &k[0][1] * q(2));
    }

    #[test]
    fn quotient_examples() {
        let (d, p) = quotient_space(3, &[]);
        assert_eq!(d, 3);
        assert!(p.is_identity());

        let (d, _) = quotient_space(2, &[vec![q(1), q(0)], vec![q(1), q(1)]]);
        assert_eq!(d, 0);

        let (d, p) = quotient_space(3, &[vec![q(1), q(1), q(0)]]);
        assert_eq!(d, 2);
        assert_eq!(p.rank(), 2);
        assert!(p.mul_vec(&[q(1), q(1), q(0)]).iter().all(Zero::is_zero));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = m(3, 3, &[2, -1, 0, -1, 2, -1, 0, -1, 2]);
        assert_eq!(a.determinant(), q(4));
        let b = RatMatrix::from_vec(2, 2, vec![Q::new(1.into(), 2.into()), q(1), q(3), q(4)]);
        assert_eq!(b.determinant(), q(-1));
        assert_eq!(m(2, 2, &[1, 2, 2, 4]).determinant(), q(0));
        assert_eq!(m(2, 2, &[0, 1, 1, 0]).determinant(), q(-1));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(2, 2, &[1, 2, 3, 4]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        assert!(m(2, 2, &[1, 2, 2, 4]).solve(&[q(1), q(0)]).is_none());
        let x = m(2, 3, &[1, 0, 1, 0, 1, 1]).solve(&[q(3), q(4)]).unwrap();
        assert_eq!(m(2, 3, &[1, 0, 1, 0, 1, 1]).mul_vec(&x), vec![q(3), q(4)]);
    }

    #[test]
    fn span_coords_roundtrip() {
        let basis = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let sc = SpanCoords::new(3, &basis);
        assert_eq!(sc.coords(&[q(2), q(5), q(3)]), Some(vec![q(2), q(3)]));
        assert_eq!(sc.coords(&[q(1), q(0), q(0)]), None);
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |e| RatMatrix::from_i64(r, c, &e))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in small_matrix()) {
            let k = a.kernel_basis();
            prop_assert_eq!(a.rank() + k.len(), a.cols());
            for v in &k {
                prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn rref_is_idempotent(a in small_matrix()) {
            let (r, p) = a.rref();
            let (r2, p2) = r.rref();
            prop_assert_eq!(r, r2);
            prop_assert_eq!(p, p2);
        }

        #[test]
        fn determinant_agrees_with_rank(a in small_matrix()) {
            if a.is_square() {
                prop_assert_eq!(a.determinant().is_zero(), a.rank() < a.rows());
            }
        }
    }
}
