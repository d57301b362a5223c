//! Built-in scenarios.
//!
//! The minimal polynomials of the non-rational vertex fields are fixed
//! choices; only their degrees matter for the classification.

use crate::error::{Error, Result};
use crate::exactalg::Polynomial;
use crate::species::{Bimodule, DivisionAlgebraHandle, SpeciesScenario, Vertex};

pub const IDS: &[&str] = &[
    "a2",
    "a3",
    "b2_dual",
    "c2",
    "c3_surface",
    "d4_elliptic",
    "g2_threefold",
    "two_surfaces",
    "product_no_coupling",
];

/// Scenarios of finite representation type.
pub const FINITE_IDS: &[&str] = &["a2", "a3", "b2_dual", "c2", "c3_surface", "d4_elliptic", "g2_threefold"];

fn qv(id: &str) -> Vertex {
    Vertex::new(id, DivisionAlgebraHandle::rationals())
}

fn field(id: &str, minpoly: &[i64]) -> Vertex {
    Vertex::new(id, DivisionAlgebraHandle::number_field(Polynomial::from_i64(minpoly)).expect("irreducible"))
}

pub fn get(id: &str) -> Result<SpeciesScenario> {
    let sqrt2 = [-2, 0, 1];
    match id {
        "a2" => SpeciesScenario::new(id, vec![qv("k")], vec![qv("A1")], vec![Bimodule::scalar(0, 0, 1)]),
        "a3" => SpeciesScenario::new(
            id,
            vec![qv("k")],
            vec![qv("A1"), qv("A2")],
            vec![Bimodule::scalar(0, 0, 1), Bimodule::scalar(0, 1, 1)],
        ),
        "b2_dual" => {
            let k = field("k", &sqrt2);
            let m = Bimodule::left_regular(0, 0, k.algebra.spec());
            SpeciesScenario::new(id, vec![k], vec![qv("A1")], vec![m])
        }
        "c2" => {
            let a = field("A1", &sqrt2);
            let m = Bimodule::right_regular(0, 0, a.algebra.spec());
            SpeciesScenario::new(id, vec![qv("k")], vec![a], vec![m])
        }
        "c3_surface" => {
            let a2 = field("A2", &sqrt2);
            let m = Bimodule::right_regular(0, 1, a2.algebra.spec());
            SpeciesScenario::new(id, vec![qv("k")], vec![qv("A1"), a2], vec![Bimodule::scalar(0, 0, 1), m])
        }
        "d4_elliptic" => SpeciesScenario::new(
            id,
            vec![qv("k")],
            vec![qv("A1"), qv("A2"), qv("A3")],
            (0..3).map(|y| Bimodule::scalar(0, y, 1)).collect(),
        ),
        "g2_threefold" => {
            let a = field("A1", &[-1, -1, 0, 1]);
            let m = Bimodule::right_regular(0, 0, a.algebra.spec());
            SpeciesScenario::new(id, vec![qv("k")], vec![a], vec![m])
        }
        "two_surfaces" => SpeciesScenario::new(
            id,
            vec![qv("k")],
            vec![qv("A1"), qv("A2")],
            vec![Bimodule::scalar(0, 0, 2), Bimodule::scalar(0, 1, 2)],
        ),
        "product_no_coupling" => SpeciesScenario::new(
            id,
            vec![qv("k1"), field("k2", &sqrt2)],
            vec![field("A1", &[1, 0, 1]), qv("A2")],
            Vec::new(),
        ),
        _ => Err(Error::Parse(format!("unknown catalog id {id:?}; known: {}", IDS.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_entry_builds() {
        for id in IDS {
            let s = get(id).unwrap();
            assert_eq!(s.name(), *id);
        }
        assert!(get("nope").is_err());
    }
}
