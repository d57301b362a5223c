use std::collections::HashSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{factor_rational, q, AlgebraSpec, Polynomial, RatMatrix, Q};

/// How a vertex algebra was specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSource {
    Rationals,
    NumberField(Polynomial),
    StructureConstants,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Commutative, with an irreducible defining minimal polynomial.
    CertifiedField,
    /// Declared a division algebra; only smoke-tested.
    AssertedDivision,
}

impl Certification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Certification::CertifiedField => "certified-field",
            Certification::AssertedDivision => "asserted-division",
        }
    }
}

/// A vertex algebra together with how its division property was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionAlgebraHandle {
    spec: AlgebraSpec,
    source: AlgebraSource,
    certification: Certification,
}

const SMOKE_SAMPLES: usize = 1000;

impl DivisionAlgebraHandle {
    pub fn rationals() -> Self {
        DivisionAlgebraHandle {
            spec: AlgebraSpec::rationals(),
            source: AlgebraSource::Rationals,
            certification: Certification::CertifiedField,
        }
    }

    /// `Q[t]/(m)`; rejected unless `m` is irreducible.
    pub fn number_field(minpoly: Polynomial) -> Result<Self> {
        let factors = factor_rational(&minpoly);
        if factors.len() != 1 || factors[0].multiplicity != 1 {
            return Err(Error::InvalidAlgebra(format!("defining polynomial {minpoly} is reducible")));
        }
        let minpoly = minpoly.monic();
        Ok(DivisionAlgebraHandle {
            spec: AlgebraSpec::from_minpoly(&minpoly)?,
            source: AlgebraSource::NumberField(minpoly),
            certification: Certification::CertifiedField,
        })
    }

    /// An algebra given by structure constants with a claimed certification.
    pub fn from_spec(spec: AlgebraSpec, claim: Certification) -> Result<Self> {
        match claim {
            Certification::CertifiedField => {
                if !spec.is_commutative() {
                    return Err(Error::InvalidAlgebra("certified field must be commutative".into()));
                }
                let primitive = spec
                    .candidate_elements(4 * spec.dim() + 8)
                    .into_iter()
                    .map(|a| spec.min_poly(&a))
                    .find(|p| p.degree() == Some(spec.dim()))
                    .ok_or_else(|| Error::InvalidAlgebra("no primitive element found".into()))?;
                let f = factor_rational(&primitive);
                if f.len() != 1 || f[0].multiplicity != 1 {
                    return Err(Error::InvalidAlgebra(format!(
                        "primitive element has reducible minimal polynomial {primitive}"
                    )));
                }
            }
            Certification::AssertedDivision => smoke_test_division(&spec)?,
        }
        Ok(DivisionAlgebraHandle { spec, source: AlgebraSource::StructureConstants, certification: claim })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn source(&self) -> &AlgebraSource {
        &self.source
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    /// Dimension over Q.
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn is_rationals(&self) -> bool {
        self.spec.dim() == 1
    }
}

fn smoke_test_division(spec: &AlgebraSpec) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..SMOKE_SAMPLES {
        let a: Vec<Q> = (0..spec.dim()).map(|_| q(rng.gen_range(-5..=5))).collect();
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        if !spec.is_invertible(&a) {
            return Err(Error::InvalidAlgebra("found a nonzero non-invertible element".into()));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub algebra: DivisionAlgebraHandle,
}

impl Vertex {
    pub fn new(id: impl Into<String>, algebra: DivisionAlgebraHandle) -> Self {
        Vertex { id: id.into(), algebra }
    }
}

/// A finite-dimensional `D_x`-`D_y` bimodule.
///
/// `left[t]` is the matrix of `m -> e_t m`, `right[t]` the matrix of `m -> m e_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub x: usize,
    pub y: usize,
    pub dim: usize,
    pub left: Vec<RatMatrix>,
    pub right: Vec<RatMatrix>,
}

impl Bimodule {
    /// `Q^dim` with scalar actions; both vertex algebras must be Q.
    pub fn scalar(x: usize, y: usize, dim: usize) -> Self {
        Bimodule { x, y, dim, left: vec![RatMatrix::identity(dim)], right: vec![RatMatrix::identity(dim)] }
    }

    /// `D_y` viewed as a `Q`-`D_y` bimodule via right multiplication.
    pub fn right_regular(x: usize, y: usize, alg: &AlgebraSpec) -> Self {
        let n = alg.dim();
        Bimodule { x, y, dim: n, left: vec![RatMatrix::identity(n)], right: alg.right_regular_rep() }
    }

    /// `D_x` viewed as a `D_x`-`Q` bimodule via left multiplication.
    pub fn left_regular(x: usize, y: usize, alg: &AlgebraSpec) -> Self {
        let n = alg.dim();
        Bimodule { x, y, dim: n, left: alg.regular_rep(), right: vec![RatMatrix::identity(n)] }
    }

    /// Left action of an arbitrary element of the x-algebra.
    pub fn left_of(&self, a: &[Q]) -> RatMatrix {
        combine(&self.left, a, self.dim)
    }

    /// Right action of an arbitrary element of the y-algebra.
    pub fn right_of(&self, b: &[Q]) -> RatMatrix {
        combine(&self.right, b, self.dim)
    }

    fn validate(&self, dx: &AlgebraSpec, dy: &AlgebraSpec, xid: &str, yid: &str) -> Result<()> {
        let err = |reason: String| Error::InvalidBimodule { x: xid.into(), y: yid.into(), reason };
        if self.left.len() != dx.dim() || self.right.len() != dy.dim() {
            return Err(err("one action matrix per algebra basis element required".into()));
        }
        if self.left.iter().chain(&self.right).any(|m| m.rows() != self.dim || m.cols() != self.dim) {
            return Err(err(format!("action matrices must be {0}x{0}", self.dim)));
        }
        if self.dim % dx.dim() != 0 || self.dim % dy.dim() != 0 {
            return Err(err(format!(
                "dimension {} not divisible by algebra dimensions {} and {}",
                self.dim,
                dx.dim(),
                dy.dim()
            )));
        }
        check_left_rep(&self.left, dx, self.dim).map_err(|r| err(format!("left action: {r}")))?;
        check_right_rep(&self.right, dy, self.dim).map_err(|r| err(format!("right action: {r}")))?;
        for (i, l) in self.left.iter().enumerate() {
            for (j, r) in self.right.iter().enumerate() {
                if &(l * r) != &(r * l) {
                    return Err(err(format!("(e{i} m) f{j} != e{i} (m f{j})")));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn combine(mats: &[RatMatrix], coeffs: &[Q], dim: usize) -> RatMatrix {
    let mut out = RatMatrix::zeros(dim, dim);
    for (m, c) in mats.iter().zip(coeffs) {
        if !c.is_zero() {
            out = &out + &m.scale(c);
        }
    }
    out
}

/// Checks that `mats` defines a unital left representation of `alg`.
pub(crate) fn check_left_rep(mats: &[RatMatrix], alg: &AlgebraSpec, dim: usize) -> std::result::Result<(), String> {
    if mats.len() != alg.dim() {
        return Err(format!("expected {} action matrices, got {}", alg.dim(), mats.len()));
    }
    if mats.iter().any(|m| m.rows() != dim || m.cols() != dim) {
        return Err(format!("action matrices must be {dim}x{dim}"));
    }
    if !combine(mats, alg.unit(), dim).is_identity() {
        return Err("unit does not act as the identity".into());
    }
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = &mats[i] * &mats[j];
            if lhs != combine(mats, &alg.constants()[i][j], dim) {
                return Err(format!("L(e{i}) L(e{j}) != L(e{i} e{j})"));
            }
        }
    }
    Ok(())
}

fn check_right_rep(mats: &[RatMatrix], alg: &AlgebraSpec, dim: usize) -> std::result::Result<(), String> {
    if !combine(mats, alg.unit(), dim).is_identity() {
        return Err("unit does not act as the identity".into());
    }
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            // (m e_i) e_j = m (e_i e_j)
            let lhs = &mats[j] * &mats[i];
            if lhs != combine(mats, &alg.constants()[i][j], dim) {
                return Err(format!("R(e{j}) R(e{i}) != R(e{i} e{j})"));
            }
        }
    }
    Ok(())
}

/// The datum of a triangular matrix ring: vertex algebras on the x-side and
/// y-side, and bimodules `M_{x,y}` (absent pairs are zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeciesScenario {
    name: String,
    x_vertices: Vec<Vertex>,
    y_vertices: Vec<Vertex>,
    bimodules: Vec<Bimodule>,
}

impl SpeciesScenario {
    pub fn new(
        name: impl Into<String>,
        x_vertices: Vec<Vertex>,
        y_vertices: Vec<Vertex>,
        mut bimodules: Vec<Bimodule>,
    ) -> Result<Self> {
        let name = name.into();
        let mut seen = HashSet::new();
        for v in x_vertices.iter().chain(&y_vertices) {
            if !seen.insert(v.id.clone()) {
                return Err(Error::InvalidScenario(format!("duplicate vertex id {}", v.id)));
            }
        }
        bimodules.sort_by_key(|b| (b.x, b.y));
        for w in bimodules.windows(2) {
            if (w[0].x, w[0].y) == (w[1].x, w[1].y) {
                return Err(Error::InvalidScenario(format!(
                    "two bimodules on edge {}-{}",
                    x_vertices[w[0].x].id, y_vertices[w[0].y].id
                )));
            }
        }
        bimodules.retain(|b| b.dim > 0);
        for b in &bimodules {
            let (Some(xv), Some(yv)) = (x_vertices.get(b.x), y_vertices.get(b.y)) else {
                return Err(Error::InvalidScenario("bimodule endpoint out of range".into()));
            };
            b.validate(xv.algebra.spec(), yv.algebra.spec(), &xv.id, &yv.id)?;
        }
        Ok(SpeciesScenario { name, x_vertices, y_vertices, bimodules })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn x_vertices(&self) -> &[Vertex] {
        &self.x_vertices
    }

    pub fn y_vertices(&self) -> &[Vertex] {
        &self.y_vertices
    }

    pub fn bimodules(&self) -> &[Bimodule] {
        &self.bimodules
    }

    pub fn x_alg(&self, x: usize) -> &AlgebraSpec {
        self.x_vertices[x].algebra.spec()
    }

    pub fn y_alg(&self, y: usize) -> &AlgebraSpec {
        self.y_vertices[y].algebra.spec()
    }

    pub fn bimodule(&self, x: usize, y: usize) -> Option<&Bimodule> {
        self.bimodules.iter().find(|b| b.x == x && b.y == y)
    }

    /// Bimodules with the given x-endpoint, in y order.
    pub fn bimodules_at_x(&self, x: usize) -> impl Iterator<Item = &Bimodule> {
        self.bimodules.iter().filter(move |b| b.x == x)
    }

    pub fn x_index(&self, id: &str) -> Option<usize> {
        self.x_vertices.iter().position(|v| v.id == id)
    }

    pub fn y_index(&self, id: &str) -> Option<usize> {
        self.y_vertices.iter().position(|v| v.id == id)
    }

    /// Vertex ids in root-datum order: x-side first, then y-side.
    pub fn vertex_ids(&self) -> Vec<String> {
        self.x_vertices.iter().chain(&self.y_vertices).map(|v| v.id.clone()).collect()
    }

    /// Q-dimensions of vertex algebras in root-datum order.
    pub fn vertex_dims(&self) -> Vec<usize> {
        self.x_vertices.iter().chain(&self.y_vertices).map(|v| v.algebra.dim()).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.x_vertices.len() + self.y_vertices.len()
    }

    /// The triangular matrix ring as a Q-algebra.
    ///
    /// Basis order: x-algebras, y-algebras, then bimodules in edge order.
    /// Product: `(x, y, m)(x', y', m') = (x x', y y', x m' + m y')`.
    pub fn triangular_ring(&self) -> Result<AlgebraSpec> {
        let mut offsets_x = Vec::new();
        let mut off = 0;
        for v in &self.x_vertices {
            offsets_x.push(off);
            off += v.algebra.dim();
        }
        let mut offsets_y = Vec::new();
        for v in &self.y_vertices {
            offsets_y.push(off);
            off += v.algebra.dim();
        }
        let mut offsets_m = Vec::new();
        for b in &self.bimodules {
            offsets_m.push(off);
            off += b.dim;
        }
        let n = off;
        let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
        let mut labels = vec![String::new(); n];
        let mut unit = vec![Q::zero(); n];
        for (xi, v) in self.x_vertices.iter().enumerate() {
            let a = v.algebra.spec();
            let o = offsets_x[xi];
            for i in 0..a.dim() {
                labels[o + i] = format!("{}:{}", v.id, a.labels()[i]);
                unit[o + i] = a.unit()[i].clone();
                for j in 0..a.dim() {
                    for k in 0..a.dim() {
                        c[o + i][o + j][o + k] = a.constants()[i][j][k].clone();
                    }
                }
            }
        }
        for (yi, v) in self.y_vertices.iter().enumerate() {
            let a = v.algebra.spec();
            let o = offsets_y[yi];
            for i in 0..a.dim() {
                labels[o + i] = format!("{}:{}", v.id, a.labels()[i]);
                unit[o + i] = a.unit()[i].clone();
                for j in 0..a.dim() {
                    for k in 0..a.dim() {
                        c[o + i][o + j][o + k] = a.constants()[i][j][k].clone();
                    }
                }
            }
        }
        for (bi, b) in self.bimodules.iter().enumerate() {
            let om = offsets_m[bi];
            let ox = offsets_x[b.x];
            let oy = offsets_y[b.y];
            for s in 0..b.dim {
                labels[om + s] = format!(
                    "m[{},{}]{}",
                    self.x_vertices[b.x].id, self.y_vertices[b.y].id, s
                );
                // x * m
                for (t, l) in b.left.iter().enumerate() {
                    for k in 0..b.dim {
                        c[ox + t][om + s][om + k] = l.get(k, s).clone();
                    }
                }
                // m * y
                for (t, r) in b.right.iter().enumerate() {
                    for k in 0..b.dim {
                        c[om + s][oy + t][om + k] = r.get(k, s).clone();
                    }
                }
            }
        }
        AlgebraSpec::new(labels, c, unit)
    }
}

/// The center of the triangular ring: pairs `(x, y)` of central elements with
/// `x m = m y` on every bimodule.
pub fn ring_center(s: &SpeciesScenario) -> AlgebraSpec {
    let algs: Vec<&AlgebraSpec> = s
        .x_vertices()
        .iter()
        .chain(s.y_vertices())
        .map(|v| v.algebra.spec())
        .collect();
    let offsets: Vec<usize> = algs
        .iter()
        .scan(0, |acc, a| {
            let o = *acc;
            *acc += a.dim();
            Some(o)
        })
        .collect();
    let n: usize = algs.iter().map(|a| a.dim()).sum();
    let nx = s.x_vertices().len();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (v, a) in algs.iter().enumerate() {
        let o = offsets[v];
        for i in 0..a.dim() {
            for k in 0..a.dim() {
                let mut row = vec![Q::zero(); n];
                for j in 0..a.dim() {
                    row[o + j] = &a.constants()[j][i][k] - &a.constants()[i][j][k];
                }
                rows.push(row);
            }
        }
    }
    for b in s.bimodules() {
        let ox = offsets[b.x];
        let oy = offsets[nx + b.y];
        // sum_t x_t L_t - sum_t y_t R_t = 0, entrywise
        for r in 0..b.dim {
            for col in 0..b.dim {
                let mut row = vec![Q::zero(); n];
                for (t, l) in b.left.iter().enumerate() {
                    row[ox + t] += l.get(r, col);
                }
                for (t, rm) in b.right.iter().enumerate() {
                    row[oy + t] -= rm.get(r, col);
                }
                rows.push(row);
            }
        }
    }
    let basis = RatMatrix::from_rows(n, rows).kernel_basis();
    let owned: Vec<AlgebraSpec> = algs.into_iter().cloned().collect();
    let product = AlgebraSpec::product(&owned);
    product.subalgebra(&basis).expect("center is a unital commutative subalgebra")
}
