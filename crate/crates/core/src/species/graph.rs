//! Valued graphs, Cartan matrices and finite root systems.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::{One, Signed};

use super::scenario::SpeciesScenario;
use crate::error::{Error, Result};
use crate::exactalg::{q, RatMatrix, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedEdge {
    pub a: usize,
    pub b: usize,
    /// `(d_ab, d_ba)`: for a species edge, (dim over the a-side algebra, dim over the b-side algebra).
    pub value: (u32, u32),
}

/// An undirected simple graph with positive integer edge values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedGraph {
    vertices: Vec<String>,
    edges: Vec<ValuedEdge>,
}

impl ValuedGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<ValuedEdge>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &edges {
            if e.a >= vertices.len() || e.b >= vertices.len() || e.a == e.b {
                return Err(Error::InvalidScenario(format!("bad edge {}-{}", e.a, e.b)));
            }
            if e.value.0 == 0 || e.value.1 == 0 {
                return Err(Error::InvalidScenario("edge values must be positive".into()));
            }
            if !seen.insert((e.a.min(e.b), e.a.max(e.b))) {
                return Err(Error::InvalidScenario("graph must be simple".into()));
            }
        }
        Ok(ValuedGraph { vertices, edges })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[ValuedEdge] {
        &self.edges
    }
}

/// The valued graph of a scenario: vertices x-side then y-side, one edge per
/// nonzero bimodule valued `(dim_{D_x} M, dim_{D_y} M)`.
pub fn valued_graph(s: &SpeciesScenario) -> Result<ValuedGraph> {
    let nx = s.x_vertices().len();
    let mut edges = Vec::new();
    for b in s.bimodules() {
        let fx = s.x_alg(b.x).dim();
        let fy = s.y_alg(b.y).dim();
        if b.dim % fx != 0 || b.dim % fy != 0 {
            return Err(Error::InvalidBimodule {
                x: s.x_vertices()[b.x].id.clone(),
                y: s.y_vertices()[b.y].id.clone(),
                reason: "dimension not divisible by an acting algebra".into(),
            });
        }
        edges.push(ValuedEdge { a: b.x, b: nx + b.y, value: ((b.dim / fx) as u32, (b.dim / fy) as u32) });
    }
    ValuedGraph::new(s.vertex_ids(), edges)
}

/// Cartan matrix, symmetrizer and (optionally) positive roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub labels: Vec<String>,
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizer: Vec<Q>,
    pub roots: Vec<Vec<i64>>,
}

/// Cartan matrix of a valued graph: for an edge `{a, b}` valued `(d_ab, d_ba)`,
/// `c_ab = -d_ab` and `c_ba = -d_ba`.
pub fn cartan_matrix(g: &ValuedGraph) -> Result<RootDatum> {
    let n = g.vertices().len();
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for e in g.edges() {
        c[e.a][e.b] = -(e.value.0 as i64);
        c[e.b][e.a] = -(e.value.1 as i64);
    }
    RootDatum::from_cartan(g.vertices().to_vec(), c)
}

impl RootDatum {
    /// Validates a generalized Cartan matrix and computes a symmetrizer by
    /// traversal of each connected component.
    pub fn from_cartan(labels: Vec<String>, cartan: Vec<Vec<i64>>) -> Result<Self> {
        let n = cartan.len();
        if labels.len() != n || cartan.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidScenario("Cartan matrix must be square".into()));
        }
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(Error::InvalidScenario("Cartan diagonal must be 2".into()));
            }
            for j in 0..n {
                if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::InvalidScenario(format!("bad off-diagonal entry at ({i},{j})")));
                }
            }
        }
        let mut d: Vec<Option<Q>> = vec![None; n];
        for start in 0..n {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(Q::one());
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let di = d[i].clone().unwrap();
                for j in 0..n {
                    if i == j || cartan[i][j] == 0 {
                        continue;
                    }
                    // d_i c_ij = d_j c_ji
                    let want = &di * q(cartan[i][j]) / q(cartan[j][i]);
                    match &d[j] {
                        None => {
                            d[j] = Some(want);
                            queue.push_back(j);
                        }
                        Some(dj) if *dj != want => {
                            return Err(Error::NotSymmetrizable(format!(
                                "cycle through {} and {} is inconsistent",
                                labels[i], labels[j]
                            )))
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(RootDatum {
            labels,
            cartan,
            symmetrizer: d.into_iter().map(Option::unwrap).collect(),
            roots: Vec::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// `B = diag(d) C`, symmetric.
    pub fn symmetrized(&self) -> RatMatrix {
        let n = self.rank();
        let mut b = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                b.set(i, j, &self.symmetrizer[i] * q(self.cartan[i][j]));
            }
        }
        b
    }

    /// Simple reflection `s_i(beta) = beta - <alpha_i^vee, beta> alpha_i`.
    pub fn reflect(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let pairing: i64 = self.cartan[i].iter().zip(beta).map(|(c, b)| c * b).sum();
        let mut out = beta.to_vec();
        out[i] -= pairing;
        out
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if !seen[j] && self.cartan[i][j] != 0 {
                        seen[j] = true;
                        comp.push(j);
                        stack.push(j);
                    }
                }
            }
            comp.sort();
            comps.push(comp);
        }
        comps
    }
}

/// Positive definiteness of the symmetrized Cartan matrix via leading principal minors.
pub fn is_finite_type(r: &RootDatum) -> bool {
    let b = r.symmetrized();
    (1..=r.rank()).all(|k| b.block(0, 0, k, k).determinant().is_positive())
}

/// All positive roots, by closing the simple roots under simple reflections
/// inside the positive cone. Sorted by height, then lexicographically.
pub fn positive_roots(r: &RootDatum) -> Result<Vec<Vec<i64>>> {
    if !is_finite_type(r) {
        return Err(Error::NotFiniteType);
    }
    let n = r.rank();
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        found.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let s = r.reflect(i, &beta);
            if s.iter().all(|&c| c >= 0) && s.iter().any(|&c| c > 0) && found.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = found.into_iter().collect();
    roots.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then_with(|| a.cmp(b)));
    Ok(roots)
}

/// Returns a copy of `r` with its positive roots filled in.
pub fn with_roots(r: &RootDatum) -> Result<RootDatum> {
    let mut out = r.clone();
    out.roots = positive_roots(r)?;
    Ok(out)
}

/// Name of the Dynkin type (components joined by `+`), or `"not-dynkin"`.
///
/// Rank-two doubly laced components are named by vertex order: `C2` when the
/// later vertex carries the long root, `B2` otherwise.
pub fn dynkin_name(r: &RootDatum) -> String {
    if r.rank() == 0 {
        return "empty".into();
    }
    let mut names = Vec::new();
    for comp in r.components() {
        match component_name(r, &comp) {
            Some(n) => names.push(n),
            None => return "not-dynkin".into(),
        }
    }
    names.join("+")
}

fn component_name(r: &RootDatum, comp: &[usize]) -> Option<String> {
    let n = comp.len();
    if n == 1 {
        return Some("A1".into());
    }
    let mut edges = Vec::new();
    for (ai, &i) in comp.iter().enumerate() {
        for &j in &comp[ai + 1..] {
            if r.cartan[i][j] != 0 {
                let (a, b) = (-r.cartan[i][j], -r.cartan[j][i]);
                if a.min(b) != 1 || a.max(b) > 3 {
                    return None;
                }
                edges.push((i, j, a * b));
            }
        }
    }
    if edges.len() != n - 1 {
        return None;
    }
    let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let neighbours = |v: usize| -> Vec<usize> {
        edges
            .iter()
            .filter_map(|e| if e.0 == v { Some(e.1) } else if e.1 == v { Some(e.0) } else { None })
            .collect()
    };
    let multi: Vec<&(usize, usize, i64)> = edges.iter().filter(|e| e.2 > 1).collect();
    let long = |v: usize| -> bool {
        comp.iter().all(|&w| r.symmetrizer[v] >= r.symmetrizer[w])
    };

    if multi.iter().any(|e| e.2 == 3) {
        return (n == 2).then(|| "G2".to_string());
    }
    if multi.len() > 1 {
        return None;
    }
    let branch: Vec<usize> = comp.iter().copied().filter(|&v| degree(v) >= 3).collect();
    if multi.is_empty() {
        if branch.is_empty() {
            return Some(format!("A{n}"));
        }
        if branch.len() > 1 || degree(branch[0]) > 3 {
            return None;
        }
        let centre = branch[0];
        let mut arms: Vec<usize> = neighbours(centre)
            .into_iter()
            .map(|start| {
                let (mut prev, mut cur, mut len) = (centre, start, 1);
                loop {
                    let next: Vec<usize> = neighbours(cur).into_iter().filter(|&w| w != prev).collect();
                    match next.as_slice() {
                        [] => break len,
                        [w] => {
                            prev = cur;
                            cur = *w;
                            len += 1;
                        }
                        _ => break usize::MAX,
                    }
                }
            })
            .collect();
        arms.sort();
        return match arms.as_slice() {
            [1, 1, _] => Some(format!("D{n}")),
            [1, 2, 2] => Some("E6".into()),
            [1, 2, 3] => Some("E7".into()),
            [1, 2, 4] => Some("E8".into()),
            _ => None,
        };
    }
    // one double edge: must lie on a path
    if !branch.is_empty() {
        return None;
    }
    let &&(u, v, _) = multi.first()?;
    if n == 2 {
        let second = u.max(v);
        return Some(if long(second) { "C2".into() } else { "B2".into() });
    }
    // walk the path from an end
    let end = *comp.iter().find(|&&w| degree(w) == 1)?;
    let mut path = vec![end];
    let mut prev = usize::MAX;
    let mut cur = end;
    while let Some(&next) = neighbours(cur).iter().find(|&&w| w != prev) {
        path.push(next);
        prev = cur;
        cur = next;
    }
    let pos = path.windows(2).position(|w| (w[0] == u && w[1] == v) || (w[0] == v && w[1] == u))?;
    if pos == 0 || pos == n - 2 {
        let tip = if pos == 0 { path[0] } else { path[n - 1] };
        Some(if long(tip) { format!("C{n}") } else { format!("B{n}") })
    } else if n == 4 && pos == 1 {
        Some("F4".into())
    } else {
        None
    }
}

/// `dim g` of the simple Lie algebra with the given Dynkin name.
pub fn lie_algebra_dimension(name: &str) -> Option<usize> {
    let (kind, rank) = name.split_at(1);
    let n: usize = rank.parse().ok()?;
    Some(match kind {
        "A" => n * (n + 2),
        "B" | "C" => n * (2 * n + 1),
        "D" => n * (2 * n - 1),
        "E" => match n {
            6 => 78,
            7 => 133,
            8 => 248,
            _ => return None,
        },
        "F" if n == 4 => 52,
        "G" if n == 2 => 14,
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(edges: &[(usize, usize, u32, u32)], n: usize) -> RootDatum {
        let g = ValuedGraph::new(
            (0..n).map(|i| i.to_string()).collect(),
            edges.iter().map(|&(a, b, x, y)| ValuedEdge { a, b, value: (x, y) }).collect(),
        )
        .unwrap();
        cartan_matrix(&g).unwrap()
    }

    /// Reflection-closure oracle independent of the BFS: iterate all words of simple
    /// reflections applied to simple roots until no new vectors appear, keep positives.
    fn brute_force_roots(r: &RootDatum) -> BTreeSet<Vec<i64>> {
        let n = r.rank();
        let mut all: BTreeSet<Vec<i64>> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        loop {
            let mut next = all.clone();
            for b in &all {
                for i in 0..n {
                    next.insert(r.reflect(i, b));
                }
            }
            if next.len() == all.len() {
                break;
            }
            all = next;
        }
        all.into_iter().filter(|v| v.iter().all(|&c| c >= 0)).collect()
    }

    #[test]
    fn a2_cartan_and_roots() {
        let r = datum(&[(0, 1, 1, 1)], 2);
        assert_eq!(r.cartan, vec![vec![2, -1], vec![-1, 2]]);
        let roots = positive_roots(&r).unwrap();
        assert_eq!(roots, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(roots.into_iter().collect::<BTreeSet<_>>(), brute_force_roots(&r));
    }

    #[test]
    fn double_two_edge_is_affine() {
        let r = datum(&[(0, 1, 2, 2)], 2);
        assert_eq!(r.cartan, vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(r.symmetrized().determinant(), q(0));
        assert!(!is_finite_type(&r));
        assert_eq!(dynkin_name(&r), "not-dynkin");
        assert!(matches!(positive_roots(&r), Err(Error::NotFiniteType)));
    }

    #[test]
    fn g2_from_three_one_edge() {
        let r = datum(&[(0, 1, 3, 1)], 2);
        assert_eq!(r.cartan[0][1], -3);
        assert_eq!(r.cartan[1][0], -1);
        assert!(is_finite_type(&r));
        assert_eq!(dynkin_name(&r), "G2");
        let roots = positive_roots(&r).unwrap();
        assert_eq!(roots.len(), 6);
        assert_eq!(roots.len(), (lie_algebra_dimension("G2").unwrap() - 2) / 2);
        assert_eq!(roots.iter().cloned().collect::<BTreeSet<_>>(), brute_force_roots(&r));
    }

    #[test]
    fn disjoint_g2_pair_is_finite() {
        let r = datum(&[(0, 1, 3, 1), (2, 3, 3, 1)], 4);
        assert!(is_finite_type(&r));
        assert_eq!(dynkin_name(&r), "G2+G2");
        assert_eq!(positive_roots(&r).unwrap().len(), 12);
    }

    #[test]
    fn d4_star() {
        let r = datum(&[(0, 1, 1, 1), (0, 2, 1, 1), (0, 3, 1, 1)], 4);
        assert!(is_finite_type(&r));
        assert_eq!(dynkin_name(&r), "D4");
        let roots = positive_roots(&r).unwrap();
        assert_eq!(roots.len(), 12);
        let highest: Vec<&Vec<i64>> = roots.iter().filter(|v| v[0] == 2).collect();
        assert_eq!(highest, vec![&vec![2, 1, 1, 1]]);
    }

    #[test]
    fn c3_and_b3_orientation() {
        // 1 - 0 <-(2,1)- 2 with the centre on the x-side
        let c3 = datum(&[(0, 1, 1, 1), (0, 2, 2, 1)], 3);
        assert_eq!(dynkin_name(&c3), "C3");
        let b3 = datum(&[(0, 1, 1, 1), (0, 2, 1, 2)], 3);
        assert_eq!(dynkin_name(&b3), "B3");
        assert_eq!(positive_roots(&c3).unwrap().len(), 9);
        assert_eq!(positive_roots(&b3).unwrap().len(), 9);
    }

    #[test]
    fn rank_two_double_edges() {
        assert_eq!(dynkin_name(&datum(&[(0, 1, 2, 1)], 2)), "C2");
        assert_eq!(dynkin_name(&datum(&[(0, 1, 1, 2)], 2)), "B2");
        assert_eq!(positive_roots(&datum(&[(0, 1, 2, 1)], 2)).unwrap().len(), 4);
    }

    #[test]
    fn exceptional_and_classical_shapes() {
        let chain = |n: usize| -> Vec<(usize, usize, u32, u32)> { (0..n - 1).map(|i| (i, i + 1, 1, 1)).collect() };
        assert_eq!(dynkin_name(&datum(&chain(5), 5)), "A5");
        let mut e6 = chain(5);
        e6.push((2, 5, 1, 1));
        let e6 = datum(&e6, 6);
        assert_eq!(dynkin_name(&e6), "E6");
        assert_eq!(positive_roots(&e6).unwrap().len(), 36);
        let f4 = datum(&[(0, 1, 1, 1), (1, 2, 2, 1), (2, 3, 1, 1)], 4);
        assert_eq!(dynkin_name(&f4), "F4");
        assert_eq!(positive_roots(&f4).unwrap().len(), 24);
        // affine D4~: star with four arms
        let d4t = datum(&[(0, 1, 1, 1), (0, 2, 1, 1), (0, 3, 1, 1), (0, 4, 1, 1)], 5);
        assert!(!is_finite_type(&d4t));
        assert_eq!(dynkin_name(&d4t), "not-dynkin");
    }

    #[test]
    fn naming_agrees_with_definiteness_on_small_graphs() {
        let values = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (1, 4)];
        for &(a, b) in &values {
            for &(c, d) in &values {
                let r = datum(&[(0, 1, a, b), (1, 2, c, d)], 3);
                assert_eq!(is_finite_type(&r), dynkin_name(&r) != "not-dynkin", "{a},{b} {c},{d}");
                if is_finite_type(&r) {
                    let name = dynkin_name(&r);
                    let roots = positive_roots(&r).unwrap();
                    assert_eq!(roots.len(), (lie_algebra_dimension(&name).unwrap() - 3) / 2);
                }
            }
        }
    }

    #[test]
    fn symmetrizer_symmetrizes() {
        let r = datum(&[(0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1)], 4);
        let b = r.symmetrized();
        assert_eq!(b, b.transpose());
    }

    #[test]
    fn non_symmetrizable_cycle_is_rejected() {
        let c = vec![vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]];
        assert!(matches!(
            RootDatum::from_cartan(vec!["a".into(), "b".into(), "c".into()], c),
            Err(Error::NotSymmetrizable(_))
        ));
    }
}
