use std::sync::Arc;

use proptest::prelude::*;

use isocat::catalog;
use isocat::checks::{self, random_object, random_scenario};
use isocat::exactalg::{AlgebraSpec, Polynomial};
use isocat::format::{object_to_json, parse_object, parse_scenario, scenario_to_json};
use isocat::reptype::classify;
use isocat::species::{cartan_matrix, positive_roots, ring_center, valued_graph, Bimodule, SpeciesScenario};
use isocat::wittmod::{realize_partition, witt_partition, VModule, WittPartition};
use num_traits::Zero;

fn scenario_for(pick: usize, seed: u64) -> Arc<SpeciesScenario> {
    let ids = ["a2", "c2", "b2_dual", "g2_threefold", "d4_elliptic", "c3_surface", "two_surfaces", "a3"];
    if pick < ids.len() {
        Arc::new(catalog::get(ids[pick]).unwrap())
    } else {
        Arc::new(random_scenario(&mut checks::rng(seed), pick))
    }
}

fn small_algebra(kind: usize, n: usize) -> AlgebraSpec {
    match kind {
        0 => AlgebraSpec::upper_triangular(n),
        1 => AlgebraSpec::matrix_algebra(n.min(2)),
        2 => AlgebraSpec::product(&[
            AlgebraSpec::upper_triangular(n),
            AlgebraSpec::from_minpoly(&Polynomial::from_i64(&[-2, 0, 1])).unwrap(),
        ]),
        _ => AlgebraSpec::from_minpoly(&Polynomial::from_i64(&[0, 0, 1])).unwrap(),
    }
}

/// Same scenario with the y-vertices listed in the order `perm`.
fn permute_y(s: &SpeciesScenario, perm: &[usize]) -> SpeciesScenario {
    let ys = perm.iter().map(|&j| s.y_vertices()[j].clone()).collect();
    let bims = s
        .bimodules()
        .iter()
        .map(|b| Bimodule { y: perm.iter().position(|&j| j == b.y).unwrap(), ..b.clone() })
        .collect();
    SpeciesScenario::new(s.name(), s.x_vertices().to_vec(), ys, bims).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn radical_is_nilpotent(kind in 0usize..4, n in 1usize..4, order in proptest::collection::vec(0usize..64, 8)) {
        let a = small_algebra(kind, n);
        let rad = a.radical();
        if !rad.is_empty() {
            let mut acc = rad[order[0] % rad.len()].clone();
            for k in 1..a.dim() {
                acc = a.mul(&acc, &rad[order[k % order.len()] % rad.len()]);
            }
            prop_assert!(acc.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn center_is_central_and_unital(pick in 0usize..12, seed in any::<u64>()) {
        let s = scenario_for(pick, seed);
        let r = s.triangular_ring().unwrap();
        let z = r.center_basis();
        prop_assert_eq!(z.len(), ring_center(&s).dim());
        for c in &z {
            for i in 0..r.dim() {
                let e = r.basis_vector(i);
                prop_assert_eq!(r.mul(c, &e), r.mul(&e, c));
            }
        }
        let one = r.unit().to_vec();
        for i in 0..r.dim() {
            let e = r.basis_vector(i);
            prop_assert_eq!(r.mul(&one, &e), e.clone());
        }
    }

    #[test]
    fn bimodule_actions_commute(pick in 0usize..12, seed in any::<u64>()) {
        let s = scenario_for(pick, seed);
        for b in s.bimodules() {
            let (a, d) = (s.x_alg(b.x), s.y_alg(b.y));
            for i in 0..a.dim() {
                for j in 0..d.dim() {
                    let l = b.left_of(&a.basis_vector(i));
                    let r = b.right_of(&d.basis_vector(j));
                    prop_assert_eq!(&l * &r, &r * &l);
                }
            }
        }
    }

    #[test]
    fn homological_suites(pick in 0usize..12, seed in any::<u64>()) {
        let s = scenario_for(pick, seed);
        for rep in checks::run_all(&s, seed, 2) {
            prop_assert!(rep.ok(), "{} {}: {:?}", s.name(), rep.name, rep.counterexample);
        }
    }

    #[test]
    fn objects_round_trip(pick in 0usize..12, seed in any::<u64>()) {
        let s = scenario_for(pick, seed);
        let z = random_object(&s, &mut checks::rng(seed), 2);
        let back = parse_object(&object_to_json(&z), &s).unwrap();
        prop_assert_eq!(back, z);
        let t = parse_scenario(&scenario_to_json(&s)).unwrap();
        prop_assert_eq!(&t, s.as_ref());
    }

    #[test]
    fn classification_ignores_vertex_order(pick in 0usize..12, seed in any::<u64>(), rot in 0usize..3) {
        let s = scenario_for(pick, seed);
        let n = s.y_vertices().len();
        let perm: Vec<usize> = (0..n).map(|j| (j + rot) % n.max(1)).collect();
        let (a, b) = (classify(&s).unwrap(), classify(&permute_y(&s, &perm)).unwrap());
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.frt_case, b.frt_case);
        // B2 and C2 are one diagram read from either end
        let norm = |d: &str| d.replace("B2", "C2");
        prop_assert_eq!(norm(&a.diagram), norm(&b.diagram));
    }

    #[test]
    fn conjugate_operators_share_a_partition(parts in proptest::collection::vec(1usize..=4, 1..4), seed in any::<u64>()) {
        let p = WittPartition::new(parts);
        let m = realize_partition(&p);
        let g = checks::random_invertible(m.dim(), &mut checks::rng(seed));
        let c = VModule::new(&(&g * m.op()) * &g.inverse().unwrap()).unwrap();
        prop_assert_eq!(witt_partition(&c), p);
        prop_assert!(isocat::cli::witness(&m, &c));
    }
}

#[test]
fn positive_roots_are_reflection_closed() {
    for id in catalog::FINITE_IDS {
        let s = catalog::get(id).unwrap();
        let r = cartan_matrix(&valued_graph(&s).unwrap()).unwrap();
        let roots = positive_roots(&r).unwrap();
        for beta in &roots {
            for i in 0..r.rank() {
                let mut simple = vec![0i64; r.rank()];
                simple[i] = 1;
                let image = r.reflect(i, beta);
                if beta == &simple {
                    assert!(image.iter().all(|&c| c <= 0), "{id}");
                } else {
                    assert!(roots.contains(&image), "{id}: s_{i} {beta:?} = {image:?}");
                }
            }
        }
    }
}
