//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its own PASS/FAIL line; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use isocat::catalog;
use isocat::checks::{self, random_invertible, random_object, random_scenario, Rng64};
use isocat::exactalg::RatMatrix;
use isocat::extcat::{
    abelian_ops, decompose, direct_sum_all, end_restriction_is_iso, equivariant_maps, euler_form, ext1, hom,
    is_projective, is_universal, projective_resolution, torsion_pair, universal_extension, ObjRef, TripleObject,
    YPart, VertexModule,
};
use isocat::reptype::{classify, highest_root_d4, indecomposable_vectors, root_table, Verdict};
use isocat::species::{positive_roots, ring_center, RootDatum, SpeciesScenario};
use isocat::wittmod::{intertwiners, realize_partition, witt_partition, VModule, WittPartition};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn arc(id: &str) -> Arc<SpeciesScenario> {
    Arc::new(catalog::get(id).expect("catalog id"))
}

fn classification() -> Outcome {
    let expect = [
        ("d4_elliptic", Verdict::Finite, "D4"),
        ("c3_surface", Verdict::Finite, "C3"),
        ("g2_threefold", Verdict::Finite, "G2"),
        ("two_surfaces", Verdict::Infinite, "not-dynkin"),
    ];
    for (id, v, d) in expect {
        let c = classify(&catalog::get(id).unwrap()).map_err(|e| e.to_string())?;
        check(c.verdict == v && c.diagram == d, || format!("{id}: {} {}", c.verdict.as_str(), c.diagram))?;
    }
    Ok("d4_elliptic D4, c3_surface C3, g2_threefold G2 finite; two_surfaces infinite".into())
}

/// `dim g` of the simple Lie algebra of the given type, from the classical formulas.
fn lie_dim(kind: char, n: usize) -> usize {
    match kind {
        'A' => n * (n + 2),
        'B' | 'C' => n * (2 * n + 1),
        'D' => n * (2 * n - 1),
        'G' => 14,
        _ => unreachable!(),
    }
}

fn root_counts() -> Outcome {
    let mut seen = Vec::new();
    let mut count = |name: &str, roots: usize, kind: char, n: usize| -> Result<(), String> {
        let formula = (lie_dim(kind, n) - n) / 2;
        check(roots == formula, || format!("{name}: {roots} roots, formula {formula}"))?;
        seen.push(format!("{name}:{roots}"));
        Ok(())
    };
    for (id, kind, n, want) in [
        ("a2", 'A', 2, 3),
        ("c2", 'C', 2, 4),
        ("b2_dual", 'B', 2, 4),
        ("a3", 'A', 3, 6),
        ("g2_threefold", 'G', 2, 6),
        ("c3_surface", 'C', 3, 9),
        ("d4_elliptic", 'D', 4, 12),
    ] {
        let r = indecomposable_vectors(&catalog::get(id).unwrap()).map_err(|e| e.to_string())?;
        check(r.len() == want, || format!("{id}: {} roots, expected {want}", r.len()))?;
        count(id, r.len(), kind, n)?;
    }
    let b3 = RootDatum::from_cartan(
        vec!["1".into(), "2".into(), "3".into()],
        vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]],
    )
    .map_err(|e| e.to_string())?;
    count("B3", positive_roots(&b3).map_err(|e| e.to_string())?.len(), 'B', 3)?;
    let d4 = indecomposable_vectors(&catalog::get("d4_elliptic").unwrap()).unwrap();
    let top = d4.iter().max_by_key(|r| r.iter().sum::<usize>()).unwrap();
    check(top == &vec![2, 1, 1, 1], || format!("D4 highest root {top:?}"))?;
    check(d4.iter().filter(|r| r.iter().sum::<usize>() == 5).count() == 1, || "highest root not unique".into())?;
    let z = highest_root_d4(&arc("d4_elliptic")).map_err(|e| e.to_string())?;
    check(z.dim_vector() == vec![2, 1, 1, 1], || "constructed highest-root object has wrong dimensions".into())?;
    Ok(format!("{}; D4 highest root (2;1,1,1)", seen.join(" ")))
}

/// The scenarios the random sweeps run over: catalog shapes plus generated ones.
fn sweep_scenarios() -> Vec<Arc<SpeciesScenario>> {
    let mut v: Vec<_> = ["a2", "c2", "b2_dual", "g2_threefold", "d4_elliptic", "c3_surface", "two_surfaces"]
        .into_iter()
        .map(arc)
        .collect();
    let mut r = checks::rng(2024);
    for k in 0..3 {
        v.push(Arc::new(random_scenario(&mut r, k)));
    }
    v
}

fn y_hom_count(a: &YPart, b: &YPart) -> usize {
    a.modules().iter().zip(b.modules()).map(|(p, q)| equivariant_maps(p, q).len()).sum()
}

fn x_hom_count(a: &[VertexModule], b: &[VertexModule]) -> usize {
    a.iter().zip(b).map(|(p, q)| equivariant_maps(p, q).len()).sum()
}

fn five_term() -> Outcome {
    let scenarios = sweep_scenarios();
    let per = 2000 / scenarios.len() + 1;
    let mut pairs = 0;
    for (k, s) in scenarios.iter().enumerate() {
        let mut r = checks::rng(300 + k as u64);
        for _ in 0..per {
            let a = Arc::new(random_object(s, &mut r, 2));
            let b = Arc::new(random_object(s, &mut r, 2));
            let h = hom(&a, &b).map_err(|e| e.to_string())?.len() as i64;
            let e = ext1(&a, &b).map_err(|e| e.to_string())?.dim as i64;
            // Hom(F(Y), X') counted on the universal extension's X-part
            let fy = universal_extension(s, a.y());
            let rhs = x_hom_count(a.x(), b.x()) as i64 + y_hom_count(a.y(), b.y()) as i64
                - x_hom_count(fy.x(), b.x()) as i64;
            check(h - e == rhs, || format!("{}: hom {h} - ext {e} != {rhs}", s.name()))?;
            euler_form(&a, &b).map_err(|e| e.to_string())?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs over {} scenarios", scenarios.len()))
}

fn heredity() -> Outcome {
    let scenarios = sweep_scenarios();
    let per = 500 / scenarios.len() + 1;
    let (mut objects, mut probes_run) = (0, 0);
    for (k, s) in scenarios.iter().enumerate() {
        let mut r = checks::rng(400 + k as u64);
        let simples: Vec<ObjRef> =
            (0..s.x_vertices().len()).map(|x| Arc::new(TripleObject::simple_x(s, x))).collect();
        let probes: Vec<ObjRef> = (0..100).map(|_| Arc::new(random_object(s, &mut r, 1))).collect();
        for _ in 0..per {
            let z = Arc::new(random_object(s, &mut r, 2));
            let res = projective_resolution(&z).map_err(|e| e.to_string())?;
            check(res.d0.after(&res.d1).is_zero(), || "d0 d1 != 0".into())?;
            let k1 = abelian_ops(&res.d1).map_err(|e| e.to_string())?;
            let k0 = abelian_ops(&res.d0).map_err(|e| e.to_string())?;
            check(k1.kernel.is_zero() && k0.cokernel.is_zero(), || "resolution not exact at the ends".into())?;
            check(k1.image.dim_vector() == k0.kernel.dim_vector(), || "resolution not exact at P0".into())?;
            for p in [&res.p0, &res.p1] {
                check(is_projective(p), || "resolution term not projective".into())?;
                for w in &probes {
                    check(ext1(p, w).map_err(|e| e.to_string())?.dim == 0, || "Ext^1(P, w) != 0".into())?;
                    probes_run += 1;
                }
            }
            let mono = z.eta().iter().all(|m| m.rank() == m.cols());
            let mut vanish = true;
            for sx in &simples {
                vanish &= ext1(&z, sx).map_err(|e| e.to_string())?.dim == 0;
            }
            check(is_projective(&z) == mono && mono == vanish, || "projectivity criteria disagree".into())?;
            objects += 1;
        }
    }
    Ok(format!("{objects} resolutions, {probes_run} Ext probes"))
}

fn x_only(z: &TripleObject) -> bool {
    z.y().modules().iter().all(|m| m.dim() == 0)
}

fn torsion_axioms() -> Outcome {
    let scenarios = sweep_scenarios();
    let per = 200 / scenarios.len() + 1;
    let mut n = 0;
    for (k, s) in scenarios.iter().enumerate() {
        let mut r = checks::rng(500 + k as u64);
        let rep = checks::torsion_exactness(s, &mut r, per);
        let pv = checks::pair_vanishing(s, &mut r, per / 2 + 1);
        check(rep.ok() && pv.ok(), || format!("{}: {:?} {:?}", s.name(), rep.counterexample, pv.counterexample))?;
        for _ in 0..per / 2 + 1 {
            let z = Arc::new(random_object(s, &mut r, 2));
            let tp = torsion_pair(&z).map_err(|e| e.to_string())?;
            check(x_only(&tp.sub) && tp.quot.x().iter().all(|m| m.dim() == 0), || "torsion pair parts misplaced".into())?;
        }
        n += rep.total;
    }
    Ok(format!("{n} random short exact sequences; Hom(X, Y) = 0 on all samples"))
}

fn universality() -> Outcome {
    let scenarios = sweep_scenarios();
    let per = 500 / scenarios.len() + 1;
    let (mut n, mut gap) = (0, 0);
    for (k, s) in scenarios.iter().enumerate() {
        let mut r = checks::rng(600 + k as u64);
        for i in 0..per {
            let z = Arc::new(if i % 3 == 0 { checks::twisted_universal(s, &mut r) } else { random_object(s, &mut r, 2) });
            let v = is_universal(&z).map_err(|e| e.to_string())?;
            check(i % 3 != 0 || v.universal, || "twisted E(Y) not universal".into())?;
            if v.end_and_self_ext && !v.universal {
                gap += 1;
            }
            n += 1;
        }
    }
    let mut ys = 0;
    for id in catalog::IDS {
        let s = arc(id);
        for j in 0..s.y_vertices().len() {
            for mult in 1..=2 {
                let y = VertexModule::free(s.y_alg(j), mult);
                let mods = (0..s.y_vertices().len())
                    .map(|t| if t == j { y.clone() } else { VertexModule::zero(s.y_alg(t)) })
                    .collect();
                let yp = YPart::new(&s, mods, None).map_err(|e| e.to_string())?;
                let e = Arc::new(universal_extension(&s, &yp));
                check(end_restriction_is_iso(&e).map_err(|e| e.to_string())?, || format!("{id}: End(E(Y)) != End(Y)"))?;
                ys += 1;
            }
        }
        let all: Vec<VertexModule> = (0..s.y_vertices().len()).map(|t| VertexModule::free(s.y_alg(t), 1)).collect();
        let e = Arc::new(universal_extension(&s, &YPart::new(&s, all, None).unwrap()));
        check(end_restriction_is_iso(&e).map_err(|e| e.to_string())?, || format!("{id}: End(E(Y)) != End(Y)"))?;
        ys += 1;
    }
    Ok(format!(
        "{n} objects, criteria consistent; {gap} exceptional non-universal objects outside the End/Ext criterion's reach; End(E(Y)) = End(Y) on {ys} catalog Y"
    ))
}

fn center() -> Outcome {
    let d4 = ring_center(&catalog::get("d4_elliptic").unwrap()).dim();
    check(d4 == 1, || format!("d4_elliptic center dim {d4}"))?;
    let s = catalog::get("product_no_coupling").unwrap();
    let sum: usize = s
        .x_vertices()
        .iter()
        .chain(s.y_vertices())
        .map(|v| v.algebra.spec().center_basis().len())
        .sum();
    let p = ring_center(&s).dim();
    check(p == sum, || format!("product_no_coupling center dim {p}, vertex centers {sum}"))?;
    Ok(format!("d4_elliptic 1; product_no_coupling {p} = sum of vertex centers"))
}

fn krull_schmidt() -> Outcome {
    let mut tables = Vec::new();
    let mut roots = 0;
    for id in catalog::FINITE_IDS {
        let s = arc(id);
        let t = root_table(&s, 77).map_err(|e| format!("{id}: {e}"))?;
        check(t.iter().all(|e| e.certified), || format!("{id}: uncertified entry"))?;
        roots += t.len();
        tables.push((s, t));
    }
    let mut r = checks::rng(800);
    let trials = 210;
    for k in 0..trials {
        let (s, t) = &tables[k % tables.len()];
        let m = r.gen_range(1..=4);
        let picks: Vec<ObjRef> = (0..m).map(|_| t[r.gen_range(0..t.len())].object.clone()).collect();
        let sum = direct_sum_all(s, &picks).map_err(|e| e.to_string())?;
        let sum = Arc::new(sum);
        let d = decompose(&sum).map_err(|e| e.to_string())?;
        d.verify(&sum).map_err(|e| e.to_string())?;
        let mut want: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for p in &picks {
            *want.entry(p.dim_vector()).or_default() += 1;
        }
        let mut got: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for v in d.dim_vectors() {
            *got.entry(v).or_default() += 1;
        }
        check(got == want && d.certified(), || format!("{}: got {got:?}, want {want:?} ({})", s.name(), d.flag()))?;
    }
    Ok(format!("{roots} certified indecomposables over {} scenarios; {trials} sums decomposed", tables.len()))
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn random_partition(n: usize, r: &mut Rng64) -> WittPartition {
    let all = partitions(n, n);
    WittPartition::new(all[r.gen_range(0..all.len())].clone())
}

fn conjugated(p: &WittPartition, r: &mut Rng64) -> VModule {
    let m = realize_partition(p);
    let g = random_invertible(m.dim(), r);
    let op = &(&g * m.op()) * &g.inverse().unwrap();
    VModule::new(op).unwrap()
}

fn witt() -> Outcome {
    let mut n = 0;
    for size in 0..=12 {
        for p in partitions(size, size) {
            let p = WittPartition::new(p);
            check(witt_partition(&realize_partition(&p)) == p, || format!("roundtrip fails on {p}"))?;
            n += 1;
        }
    }
    check(n == 272, || format!("{n} partitions of size at most 12"))?;
    let mut r = checks::rng(900);
    let mut equal = 0;
    for _ in 0..100 {
        let d = r.gen_range(1..=8);
        let p = random_partition(d, &mut r);
        let q = if r.gen_bool(0.5) { p.clone() } else { random_partition(d, &mut r) };
        let (a, b) = (conjugated(&p, &mut r), conjugated(&q, &mut r));
        let same = witt_partition(&a) == witt_partition(&b);
        check(same == (p == q), || "partition of a conjugate changed".into())?;
        let iso = isocat::cli::witness(&a, &b);
        check(iso == same, || format!("{p} vs {q}: invertible intertwiner {iso}"))?;
        let basis: Vec<RatMatrix> = intertwiners(&a, &b);
        check(basis.len() == isocat::wittmod::hom_dim(&p, &q), || "intertwiner dimension".into())?;
        equal += same as usize;
    }
    Ok(format!("{n} partitions round-trip; 100 random pairs ({equal} isomorphic)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("classification", classification),
        ("root counts", root_counts),
        ("five-term exact sequence", five_term),
        ("heredity and projectives", heredity),
        ("torsion pair", torsion_axioms),
        ("universal extensions", universality),
        ("center", center),
        ("Krull-Schmidt", krull_schmidt),
        ("Witt partitions", witt),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match out {
            Ok(detail) => println!("PASS {name}: {detail} ({:.1}s)", t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} ({:.1}s)", t.elapsed().as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed in {:.1}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
