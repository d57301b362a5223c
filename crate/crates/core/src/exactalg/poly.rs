//! Dense univariate polynomials over the rationals and their factorization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{q, Q};

/// Polynomial with coefficients in ascending degree order; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    coeffs: Vec<Q>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![Q::one()] }
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Q::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division: `self = quot * d + rem` with `deg rem < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` the monic gcd.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1);
            let s = s0.sub(&qt.mul(&s1));
            let t = t0.sub(&qt.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.leading().recip();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    /// Integer primitive polynomial with positive leading coefficient, equal to `self` up to a scalar.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() {
            for c in ints.iter_mut() {
                *c /= &g;
            }
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in ints.iter_mut() {
                *c = -c.clone();
            }
        }
        ints
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

/// An irreducible monic factor with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: Polynomial,
    pub multiplicity: usize,
}

/// Factors `p` (degree >= 1) into monic irreducible factors over the rationals.
///
/// Square-free decomposition (Yun) followed by Kronecker's method on each
/// square-free part. Factors are sorted by degree, then coefficients.
pub fn factor_rational(p: &Polynomial) -> Vec<Factor> {
    assert!(p.degree().is_some_and(|d| d >= 1), "factor_rational needs degree >= 1");
    let mut out = Vec::new();
    for (part, mult) in square_free_decomposition(&p.monic()) {
        for f in split_square_free(&part) {
            out.push(Factor { poly: f, multiplicity: mult });
        }
    }
    out.sort_by(|a, b| {
        a.poly
            .degree()
            .cmp(&b.poly.degree())
            .then_with(|| a.poly.coeffs.cmp(&b.poly.coeffs))
    });
    out
}

pub fn is_irreducible(p: &Polynomial) -> bool {
    let f = factor_rational(p);
    f.len() == 1 && f[0].multiplicity == 1
}

/// Yun's algorithm; returns square-free, pairwise coprime monic parts with multiplicities.
fn square_free_decomposition(f: &Polynomial) -> Vec<(Polynomial, usize)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().is_some_and(|deg| deg > 0) {
        let a = b.gcd(&d);
        let b_next = b.div_rem(&a).0;
        let c_next = d.div_rem(&a).0;
        d = c_next.sub(&b_next.derivative());
        if a.degree().is_some_and(|deg| deg > 0) {
            out.push((a.monic(), i));
        }
        b = b_next;
        i += 1;
    }
    out
}

fn split_square_free(f: &Polynomial) -> Vec<Polynomial> {
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return vec![f.monic()];
    }
    for d in 1..=n / 2 {
        if let Some(g) = kronecker_factor(f, d) {
            let h = f.div_rem(&g).0;
            let mut out = split_square_free(&g);
            out.extend(split_square_free(&h));
            return out;
        }
    }
    vec![f.monic()]
}

fn eval_int(coeffs: &[BigInt], x: i64) -> BigInt {
    let x = BigInt::from(x);
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let Some(mut m) = n.to_u128() else {
        return vec![BigInt::one(), n];
    };
    let mut primes: Vec<(u128, u32)> = Vec::new();
    let mut p = 2u128;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            primes.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut divs = vec![1u128];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = 1u128;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.into_iter().map(BigInt::from).collect()
}

/// Searches for a monic factor of degree exactly `d` via Kronecker interpolation.
fn kronecker_factor(f: &Polynomial, d: usize) -> Option<Polynomial> {
    let ints = f.primitive_integer();
    let n = ints.len() - 1;
    // candidate evaluation points 0, 1, -1, 2, -2, ...
    let mut pts: Vec<(i64, BigInt)> = Vec::new();
    for k in 0..(4 * n as i64 + 16) {
        let a = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
        let v = eval_int(&ints, a);
        if v.is_zero() {
            return Some(Polynomial::from_i64(&[-a, 1]));
        }
        pts.push((a, v));
    }
    pts.sort_by_key(|(_, v)| v.abs());
    pts.truncate(d + 1);
    let xs: Vec<Q> = pts.iter().map(|(a, _)| q(*a)).collect();
    let basis: Vec<Polynomial> = (0..=d)
        .map(|i| {
            let mut l = Polynomial::one();
            for j in 0..=d {
                if j != i {
                    let denom = (&xs[i] - &xs[j]).recip();
                    l = l.mul(&Polynomial::new(vec![-&xs[j] * &denom, denom]));
                }
            }
            l
        })
        .collect();
    let divs: Vec<Vec<BigInt>> = pts.iter().map(|(_, v)| divisors(v)).collect();
    let lead = ints[n].clone();
    let konst = ints[0].clone();

    let mut idx = vec![0usize; d + 1];
    let mut signs = vec![false; d + 1];
    loop {
        let mut g = Polynomial::zero();
        for i in 0..=d {
            let mut y = divs[i][idx[i]].clone();
            if signs[i] {
                y = -y;
            }
            g = g.add(&basis[i].scale(&Q::from_integer(y)));
        }
        if g.degree() == Some(d) && g.coeffs.iter().all(|c| c.is_integer()) {
            let gl = g.leading().to_integer();
            let gc = g.coeffs[0].to_integer();
            if (&lead % &gl).is_zero() && (konst.is_zero() || (!gc.is_zero() && (&konst % &gc).is_zero())) {
                let (_, r) = f.div_rem(&g);
                if r.is_zero() {
                    return Some(g.monic());
                }
            }
        }
        // odometer over divisor choices and signs (first value kept positive)
        let mut pos = 0;
        loop {
            if pos > d {
                return None;
            }
            if pos > 0 && !signs[pos] {
                signs[pos] = true;
                break;
            }
            signs[pos] = false;
            idx[pos] += 1;
            if idx[pos] < divs[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
