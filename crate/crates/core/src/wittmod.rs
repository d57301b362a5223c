//! Finite-length modules over a discrete valuation ring, modelled as a
//! nilpotent operator `V` on a Q-space, and their Jordan partitions.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{RatMatrix, Q};
use num_traits::One;

/// A space with a nilpotent operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VModule {
    op: RatMatrix,
}

impl VModule {
    /// Rejects non-square or non-nilpotent operators.
    pub fn new(op: RatMatrix) -> Result<Self> {
        if !op.is_square() {
            return Err(Error::ShapeMismatch(format!("operator is {}x{}", op.rows(), op.cols())));
        }
        if !op.pow(op.rows() as u32).is_zero() {
            return Err(Error::NotNilpotent);
        }
        Ok(VModule { op })
    }

    pub fn dim(&self) -> usize {
        self.op.rows()
    }

    pub fn op(&self) -> &RatMatrix {
        &self.op
    }

    pub fn direct_sum(&self, other: &VModule) -> VModule {
        VModule { op: RatMatrix::block_diag(&[self.op.clone(), other.op.clone()]) }
    }
}

/// Block sizes in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WittPartition(Vec<usize>);

impl WittPartition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        WittPartition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Multiset union.
    pub fn union(&self, other: &WittPartition) -> WittPartition {
        WittPartition::new(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Parses `"3,2,1"` or `"(3,2,1)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Ok(WittPartition(Vec::new()));
        }
        let parts = t
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad partition part {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) {
            return Err(Error::Parse("partition parts must be positive".into()));
        }
        Ok(WittPartition::new(parts))
    }
}

impl fmt::Display for WittPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Jordan type of `V` from the ranks of its powers: the number of blocks of
/// size at least `k` is `rank V^(k-1) - rank V^k`.
pub fn witt_partition(m: &VModule) -> WittPartition {
    let n = m.dim();
    let mut ranks = vec![n];
    let mut p = RatMatrix::identity(n);
    while *ranks.last().unwrap() > 0 {
        p = &p * &m.op;
        ranks.push(p.rank());
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for k in 0..at_least.len() {
        let exact = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat(k + 1).take(exact));
    }
    WittPartition::new(parts)
}

/// Direct sum of Jordan blocks (ones on the subdiagonal).
pub fn realize_partition(p: &WittPartition) -> VModule {
    let blocks: Vec<RatMatrix> = p
        .parts()
        .iter()
        .map(|&n| {
            let mut b = RatMatrix::zeros(n, n);
            for i in 1..n {
                b.set(i, i - 1, Q::one());
            }
            b
        })
        .collect();
    VModule { op: RatMatrix::block_diag(&blocks) }
}

/// Dimension of the space of V-equivariant maps, `sum min(n_i, m_j)`.
pub fn hom_dim(p: &WittPartition, q: &WittPartition) -> usize {
    p.parts().iter().map(|&a| q.parts().iter().map(|&b| a.min(b)).sum::<usize>()).sum()
}

/// Basis of `{ T : T V_a = V_b T }`.
pub fn intertwiners(a: &VModule, b: &VModule) -> Vec<RatMatrix> {
    crate::extcat::equivariant_maps_raw(&[a.op.clone()], a.dim(), &[b.op.clone()], b.dim())
}
