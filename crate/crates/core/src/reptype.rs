//! Representation type and indecomposables indexed by positive roots.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{RatMatrix, Q};
use crate::extcat::{
    abelian_ops, decompose, equivariant_maps, find_isomorphism, sub_object, universal_extension, ObjRef,
    TripleObject, VertexModule, YPart,
};
use crate::species::{cartan_matrix, dynkin_name, is_finite_type, positive_roots, valued_graph, SpeciesScenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Finite,
    Infinite,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Finite => "finite",
            Verdict::Infinite => "infinite",
        }
    }
}

/// Which shape of the rational classification applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrtCase {
    A2,
    A3,
    C2,
    C3,
    D4,
    G2,
    None,
}

impl fmt::Display for FrtCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FrtCase::A2 => "A2",
            FrtCase::A3 => "A3",
            FrtCase::C2 => "C2",
            FrtCase::C3 => "C3",
            FrtCase::D4 => "D4",
            FrtCase::G2 => "G2",
            FrtCase::None => "none",
        };
        f.write_str(s)
    }
}

/// Per y-vertex data when the x-side is the single vertex `Q`:
/// `g = dim_Q M`, `n_i = [D_i : Q]`, `n = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCondition {
    pub vertex: String,
    pub g: usize,
    pub n_i: usize,
    pub n: usize,
    /// Edge value read off the valued graph.
    pub label: (u32, u32),
    /// `label == (g, g n / n_i)`.
    pub label_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub diagram: String,
    pub frt_case: FrtCase,
    pub conditions: Vec<VertexCondition>,
    /// `(vertex a, vertex b, value)` for every edge.
    pub labels: Vec<(String, String, (u32, u32))>,
}

pub fn classify(s: &SpeciesScenario) -> Result<Classification> {
    let g = valued_graph(s)?;
    let rd = cartan_matrix(&g)?;
    let finite = is_finite_type(&rd);
    let diagram = dynkin_name(&rd);
    if finite == (diagram == "not-dynkin") {
        return Err(Error::Consistency(format!("definiteness ({finite}) disagrees with diagram {diagram}")));
    }
    let labels = g
        .edges()
        .iter()
        .map(|e| (g.vertices()[e.a].clone(), g.vertices()[e.b].clone(), e.value))
        .collect();
    let verdict = if finite { Verdict::Finite } else { Verdict::Infinite };
    let (conditions, frt_case) = frt_report(s, &g, finite);
    Ok(Classification { verdict, diagram, frt_case, conditions, labels })
}

fn frt_report(s: &SpeciesScenario, g: &crate::species::ValuedGraph, finite: bool) -> (Vec<VertexCondition>, FrtCase) {
    if s.x_vertices().len() != 1 || !s.x_vertices()[0].algebra.is_rationals() {
        return (Vec::new(), FrtCase::None);
    }
    let mut conds = Vec::new();
    let mut all_edges = true;
    for (yi, v) in s.y_vertices().iter().enumerate() {
        let Some(b) = s.bimodule(0, yi) else {
            all_edges = false;
            continue;
        };
        let n = 1;
        let n_i = v.algebra.dim();
        let gi = b.dim / n;
        let label = g
            .edges()
            .iter()
            .find(|e| e.a == 0 && e.b == 1 + yi)
            .map(|e| e.value)
            .unwrap_or((0, 0));
        let label_matches = label.0 as usize == gi && (label.1 as usize) * n_i == gi * n;
        conds.push(VertexCondition { vertex: v.id.clone(), g: gi, n_i, n, label, label_matches });
    }
    if !finite || !all_edges {
        return (conds, FrtCase::None);
    }
    let mut sig: Vec<(usize, usize)> = conds.iter().map(|c| (c.g, c.n_i)).collect();
    sig.sort();
    let case = match sig.as_slice() {
        [(1, 1)] => FrtCase::A2,
        [(2, 2)] => FrtCase::C2,
        [(3, 3)] => FrtCase::G2,
        [(1, 1), (1, 1)] => FrtCase::A3,
        [(1, 1), (2, 2)] => FrtCase::C3,
        [(1, 1), (1, 1), (1, 1)] => FrtCase::D4,
        _ => FrtCase::None,
    };
    (conds, case)
}

/// Positive roots, read as multiplicities over the vertex algebras (x-side first).
pub fn indecomposable_vectors(s: &SpeciesScenario) -> Result<Vec<Vec<usize>>> {
    let rd = cartan_matrix(&valued_graph(s)?)?;
    let roots = positive_roots(&rd)?;
    Ok(roots.into_iter().map(|r| r.into_iter().map(|c| c as usize).collect()).collect())
}

/// A constructed indecomposable and the sampling log.
#[derive(Clone, Debug)]
pub struct Construction {
    pub object: ObjRef,
    pub attempts: usize,
    pub certified: bool,
}

pub const RETRY_BUDGET: usize = 32;

/// Samples `eta` on free modules of the root's multiplicities until
/// `decompose` certifies a single summand.
pub fn construct_indecomposable(s: &Arc<SpeciesScenario>, root: &[usize], seed: u64) -> Result<Construction> {
    let roots = indecomposable_vectors(s)?;
    if !roots.iter().any(|r| r.as_slice() == root) {
        return Err(Error::ShapeMismatch(format!("{root:?} is not a positive root")));
    }
    let base = TripleObject::free_with_zero_eta(s, root);
    let nx = s.x_vertices().len();
    let universal = universal_extension(s, base.y());
    let homs: Vec<Vec<RatMatrix>> =
        (0..nx).map(|i| equivariant_maps(&universal.x()[i], &base.x()[i])).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = Vec::new();
    for attempt in 0..RETRY_BUDGET {
        let width: i64 = if attempt < RETRY_BUDGET / 2 { 3 } else { 3 + attempt as i64 };
        let eta: Vec<RatMatrix> = (0..nx)
            .map(|i| {
                homs[i].iter().fold(RatMatrix::zeros(base.x_dim(i), base.fy_dim(i)), |acc, h| {
                    let c: i64 = rng.gen_range(-width..=width);
                    if c == 0 {
                        acc
                    } else {
                        &acc + &h.scale(&Q::from_integer(c.into()))
                    }
                })
            })
            .collect();
        let z = Arc::new(TripleObject::new(s.clone(), base.x().to_vec(), base.y().clone(), eta)?);
        let dec = decompose(&z)?;
        if dec.summands.len() == 1 && dec.certified() {
            return Ok(Construction { object: z, attempts: attempt + 1, certified: true });
        }
        log.push(format!(
            "attempt {}: {} summands {:?}, {}",
            attempt + 1,
            dec.summands.len(),
            dec.dim_vectors(),
            dec.flag()
        ));
    }
    Err(Error::RetryBudgetExhausted { attempts: RETRY_BUDGET, log: log.join("\n") })
}

/// One certified indecomposable per positive root.
#[derive(Clone, Debug)]
pub struct RootEntry {
    pub root: Vec<usize>,
    pub object: ObjRef,
    pub certified: bool,
}

pub fn root_table(s: &Arc<SpeciesScenario>, seed: u64) -> Result<Vec<RootEntry>> {
    indecomposable_vectors(s)?
        .into_iter()
        .enumerate()
        .map(|(k, root)| {
            let c = construct_indecomposable(s, &root, seed.wrapping_add(k as u64))?;
            Ok(RootEntry { root, object: c.object, certified: c.certified })
        })
        .collect()
}

/// Whether a fresh certified sample for `entry.root` is isomorphic to the stored object.
pub fn matches_stored(s: &Arc<SpeciesScenario>, entry: &RootEntry, seed: u64) -> Result<bool> {
    let fresh = construct_indecomposable(s, &entry.root, seed)?;
    let there = find_isomorphism(&entry.object, &fresh.object)?;
    let back = find_isomorphism(&fresh.object, &entry.object)?;
    Ok(there.is_some() && back.is_some())
}

/// `E(Y1 ⊕ Y2 ⊕ Y3)` modulo the diagonal line in its X-part `Q^3`.
pub fn highest_root_d4(s: &Arc<SpeciesScenario>) -> Result<ObjRef> {
    let c = classify(s)?;
    if c.frt_case != FrtCase::D4 {
        return Err(Error::ShapeMismatch(format!("scenario {} is not of the three-elliptic-curve shape", s.name())));
    }
    let ymods = (0..3).map(|j| VertexModule::free(s.y_alg(j), 1)).collect();
    let y = YPart::new(s, ymods, None)?;
    let e = Arc::new(universal_extension(s, &y));
    let diag = RatMatrix::from_i64(3, 1, &[1, 1, 1]);
    let ys: Vec<RatMatrix> = (0..3).map(|_| RatMatrix::zeros(1, 0)).collect();
    let (_, incl) = sub_object(&e, &[diag], &ys)?;
    let z = abelian_ops(&incl)?.cokernel;
    let dec = decompose(&z)?;
    if z.dim_vector() != vec![2, 1, 1, 1] || dec.summands.len() != 1 || !dec.certified() {
        return Err(Error::Consistency("highest-root object is not a certified indecomposable".into()));
    }
    Ok(z)
}
