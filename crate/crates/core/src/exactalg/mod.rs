//! Exact rational linear algebra and finite-dimensional algebra arithmetic.

mod algebra;
mod matrix;
mod poly;

pub use algebra::AlgebraSpec;
pub use matrix::{quotient_space, RatMatrix, SpanCoords};
pub use poly::{factor_rational, is_irreducible, Factor, Polynomial};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Null space basis of `m`.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Q>> {
    m.kernel_basis()
}

/// Minimal polynomial of `a` in `alg`.
pub fn min_poly(a: &[Q], alg: &AlgebraSpec) -> Polynomial {
    alg.min_poly(a)
}

/// Basis of the Jacobson radical of `alg`.
pub fn radical(alg: &AlgebraSpec) -> Vec<Vec<Q>> {
    alg.radical()
}

/// The center of `alg` with induced structure constants.
pub fn algebra_center(alg: &AlgebraSpec) -> AlgebraSpec {
    alg.center()
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Canonical `"p/q"` rendering (`"p"` when integral).
pub fn format_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
