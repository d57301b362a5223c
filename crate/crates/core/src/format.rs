//! JSON documents for scenarios, objects and operators.
//!
//! Rationals are strings `"p/q"` (or `"p"`), matrices are row-major arrays of
//! rows. `F(Y)_x` slots are ordered by y-vertex in scenario order, then by
//! the recorded `D`-basis vector, then by the bimodule basis vector.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{format_q, parse_q, AlgebraSpec, Polynomial, RatMatrix, Q};
use crate::extcat::{TripleObject, VertexModule, YPart};
use crate::species::{AlgebraSource, Bimodule, Certification, DivisionAlgebraHandle, SpeciesScenario, Vertex};

pub const SCENARIO_SCHEMA: &str = "isocat.scenario/1";
pub const OBJECT_SCHEMA: &str = "isocat.object/1";

type MatrixDoc = Vec<Vec<String>>;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default = "scenario_schema")]
    pub schema: String,
    pub name: String,
    pub x_vertices: Vec<VertexDoc>,
    pub y_vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub bimodules: Vec<BimoduleDoc>,
}

fn scenario_schema() -> String {
    SCENARIO_SCHEMA.into()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub algebra: AlgebraDoc,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum AlgebraDoc {
    #[serde(rename = "Q")]
    Rationals,
    /// `Q[t]/(minpoly)`, coefficients in ascending degree.
    #[serde(rename = "number_field")]
    NumberField { minpoly: Vec<String> },
    #[serde(rename = "structure_constants")]
    StructureConstants {
        labels: Vec<String>,
        /// `constants[i][j]` is `e_i e_j` in the basis.
        constants: Vec<Vec<Vec<String>>>,
        unit: Vec<String>,
        certification: String,
    },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BimoduleDoc {
    pub x: String,
    pub y: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_action: Option<Vec<MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_action: Option<Vec<MatrixDoc>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ObjectDoc {
    #[serde(default = "object_schema")]
    pub schema: String,
    pub scenario: String,
    pub x: Vec<ModuleDoc>,
    pub y: Vec<ModuleDoc>,
    pub eta: Vec<EtaDoc>,
}

fn object_schema() -> String {
    OBJECT_SCHEMA.into()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub vertex: String,
    pub dim: usize,
    pub action: Vec<MatrixDoc>,
    /// Recorded `D`-basis (y-side only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_basis: Option<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EtaDoc {
    pub vertex: String,
    pub matrix: MatrixDoc,
}

fn qs(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

fn parse_vec(v: &[String], what: &str) -> Result<Vec<Q>> {
    v.iter()
        .map(|s| parse_q(s).ok_or_else(|| Error::Parse(format!("{what}: {s:?} is not a rational \"p/q\""))))
        .collect()
}

pub fn matrix_doc(m: &RatMatrix) -> MatrixDoc {
    m.to_rows().iter().map(|r| qs(r)).collect()
}

/// Reads a `rows x cols` matrix; an empty list stands for zero rows.
pub fn matrix_from_doc(doc: &MatrixDoc, rows: usize, cols: usize, what: &str) -> Result<RatMatrix> {
    if doc.len() != rows || doc.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!("{what}: expected a {rows}x{cols} matrix")));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in doc {
        data.extend(parse_vec(r, what)?);
    }
    Ok(RatMatrix::from_vec(rows, cols, data))
}

fn algebra_doc(h: &DivisionAlgebraHandle) -> AlgebraDoc {
    match h.source() {
        AlgebraSource::Rationals => AlgebraDoc::Rationals,
        AlgebraSource::NumberField(p) => AlgebraDoc::NumberField { minpoly: qs(p.coeffs()) },
        AlgebraSource::StructureConstants => {
            let a = h.spec();
            AlgebraDoc::StructureConstants {
                labels: a.labels().to_vec(),
                constants: a.constants().iter().map(|row| row.iter().map(|v| qs(v)).collect()).collect(),
                unit: qs(a.unit()),
                certification: h.certification().as_str().into(),
            }
        }
    }
}

fn algebra_from_doc(d: &AlgebraDoc, vid: &str) -> Result<DivisionAlgebraHandle> {
    match d {
        AlgebraDoc::Rationals => Ok(DivisionAlgebraHandle::rationals()),
        AlgebraDoc::NumberField { minpoly } => {
            let p = Polynomial::new(parse_vec(minpoly, &format!("vertex {vid} minpoly"))?);
            if p.degree().unwrap_or(0) < 1 {
                return Err(Error::InvalidAlgebra(format!("vertex {vid}: minpoly must have degree >= 1")));
            }
            DivisionAlgebraHandle::number_field(p)
        }
        AlgebraDoc::StructureConstants { labels, constants, unit, certification } => {
            let what = format!("vertex {vid} structure constants");
            let c = constants
                .iter()
                .map(|row| row.iter().map(|v| parse_vec(v, &what)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let n = labels.len();
            if c.len() != n || c.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) || unit.len() != n {
                return Err(Error::Parse(format!("{what}: shape must be {n}x{n}x{n}")));
            }
            let spec = AlgebraSpec::new(labels.clone(), c, parse_vec(unit, &what)?)?;
            let claim = match certification.as_str() {
                "certified-field" => Certification::CertifiedField,
                "asserted-division" => Certification::AssertedDivision,
                other => return Err(Error::Parse(format!("{what}: unknown certification {other:?}"))),
            };
            DivisionAlgebraHandle::from_spec(spec, claim)
        }
    }
}

pub fn scenario_to_doc(s: &SpeciesScenario) -> ScenarioDoc {
    let vdoc = |v: &Vertex| VertexDoc { id: v.id.clone(), algebra: algebra_doc(&v.algebra) };
    let bimodules = s
        .bimodules()
        .iter()
        .map(|b| {
            let implied = s.x_alg(b.x).dim() == 1 && s.y_alg(b.y).dim() == 1;
            BimoduleDoc {
                x: s.x_vertices()[b.x].id.clone(),
                y: s.y_vertices()[b.y].id.clone(),
                dim: b.dim,
                left_action: (!implied).then(|| b.left.iter().map(matrix_doc).collect()),
                right_action: (!implied).then(|| b.right.iter().map(matrix_doc).collect()),
            }
        })
        .collect();
    ScenarioDoc {
        schema: SCENARIO_SCHEMA.into(),
        name: s.name().into(),
        x_vertices: s.x_vertices().iter().map(vdoc).collect(),
        y_vertices: s.y_vertices().iter().map(vdoc).collect(),
        bimodules,
    }
}

pub fn scenario_from_doc(d: &ScenarioDoc) -> Result<SpeciesScenario> {
    if d.schema != SCENARIO_SCHEMA {
        return Err(Error::Parse(format!("unsupported schema {:?}", d.schema)));
    }
    let xs = d
        .x_vertices
        .iter()
        .map(|v| Ok(Vertex::new(v.id.clone(), algebra_from_doc(&v.algebra, &v.id)?)))
        .collect::<Result<Vec<_>>>()?;
    let ys = d
        .y_vertices
        .iter()
        .map(|v| Ok(Vertex::new(v.id.clone(), algebra_from_doc(&v.algebra, &v.id)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut bims = Vec::new();
    for b in &d.bimodules {
        let xi = xs.iter().position(|v| v.id == b.x).ok_or_else(|| {
            Error::InvalidScenario(format!("bimodule x endpoint {:?} is not an x-vertex", b.x))
        })?;
        let yi = ys.iter().position(|v| v.id == b.y).ok_or_else(|| {
            Error::InvalidScenario(format!("bimodule y endpoint {:?} is not a y-vertex", b.y))
        })?;
        let (fx, fy) = (xs[xi].algebra.dim(), ys[yi].algebra.dim());
        let what = format!("bimodule {}-{}", b.x, b.y);
        let read = |acts: &Option<Vec<MatrixDoc>>, count: usize, side: &str| -> Result<Vec<RatMatrix>> {
            match acts {
                Some(ms) => {
                    if ms.len() != count {
                        return Err(Error::Parse(format!("{what}: {side} action needs {count} matrices")));
                    }
                    ms.iter().map(|m| matrix_from_doc(m, b.dim, b.dim, &what)).collect()
                }
                None if count == 1 => Ok(vec![RatMatrix::identity(b.dim)]),
                None => Err(Error::Parse(format!("{what}: {side} action required unless the algebra is Q"))),
            }
        };
        bims.push(Bimodule {
            x: xi,
            y: yi,
            dim: b.dim,
            left: read(&b.left_action, fx, "left")?,
            right: read(&b.right_action, fy, "right")?,
        });
    }
    SpeciesScenario::new(d.name.clone(), xs, ys, bims)
}

/// Parses a scenario document, reporting serde's line and column on syntax errors.
pub fn parse_scenario(text: &str) -> Result<SpeciesScenario> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| Error::Parse(format!("scenario: {e}")))?;
    scenario_from_doc(&doc)
}

pub fn scenario_to_json(s: &SpeciesScenario) -> String {
    serde_json::to_string_pretty(&scenario_to_doc(s)).expect("serializable")
}

pub fn object_to_doc(z: &TripleObject) -> ObjectDoc {
    let s = z.scenario();
    let x = z
        .x()
        .iter()
        .zip(s.x_vertices())
        .map(|(m, v)| ModuleDoc {
            vertex: v.id.clone(),
            dim: m.dim(),
            action: m.action().iter().map(matrix_doc).collect(),
            d_basis: None,
        })
        .collect();
    let y = z
        .y()
        .modules()
        .iter()
        .zip(s.y_vertices())
        .zip(z.y().bases())
        .map(|((m, v), b)| ModuleDoc {
            vertex: v.id.clone(),
            dim: m.dim(),
            action: m.action().iter().map(matrix_doc).collect(),
            d_basis: Some(b.iter().map(|w| qs(w)).collect()),
        })
        .collect();
    let eta = z
        .eta()
        .iter()
        .zip(s.x_vertices())
        .map(|(e, v)| EtaDoc { vertex: v.id.clone(), matrix: matrix_doc(e) })
        .collect();
    ObjectDoc { schema: OBJECT_SCHEMA.into(), scenario: s.name().into(), x, y, eta }
}

fn ordered<'a, T>(items: &'a [T], ids: &[&str], key: impl Fn(&T) -> &str, what: &str) -> Result<Vec<&'a T>> {
    if items.len() != ids.len() {
        return Err(Error::Parse(format!("{what}: expected one entry per vertex ({})", ids.join(", "))));
    }
    ids.iter()
        .map(|id| {
            items
                .iter()
                .find(|t| key(t) == *id)
                .ok_or_else(|| Error::Parse(format!("{what}: missing vertex {id}")))
        })
        .collect()
}

pub fn object_from_doc(d: &ObjectDoc, s: &Arc<SpeciesScenario>) -> Result<TripleObject> {
    if d.schema != OBJECT_SCHEMA {
        return Err(Error::Parse(format!("unsupported schema {:?}", d.schema)));
    }
    if d.scenario != s.name() {
        return Err(Error::ScenarioMismatch(d.scenario.clone(), s.name().into()));
    }
    let xids: Vec<&str> = s.x_vertices().iter().map(|v| v.id.as_str()).collect();
    let yids: Vec<&str> = s.y_vertices().iter().map(|v| v.id.as_str()).collect();
    let module = |m: &ModuleDoc, alg: &AlgebraSpec| -> Result<VertexModule> {
        let what = format!("vertex {}", m.vertex);
        if m.action.len() != alg.dim() {
            return Err(Error::Parse(format!("{what}: action needs {} matrices", alg.dim())));
        }
        let acts = m.action.iter().map(|a| matrix_from_doc(a, m.dim, m.dim, &what)).collect::<Result<Vec<_>>>()?;
        VertexModule::new(alg, m.dim, acts).map_err(|reason| Error::InvalidObject { vertex: m.vertex.clone(), reason })
    };
    let xdocs = ordered(&d.x, &xids, |m| &m.vertex, "x")?;
    let x = xdocs.iter().enumerate().map(|(i, m)| module(m, s.x_alg(i))).collect::<Result<Vec<_>>>()?;
    let ydocs = ordered(&d.y, &yids, |m| &m.vertex, "y")?;
    let ymods = ydocs.iter().enumerate().map(|(j, m)| module(m, s.y_alg(j))).collect::<Result<Vec<_>>>()?;
    let bases = ydocs
        .iter()
        .map(|m| match &m.d_basis {
            Some(b) => b.iter().map(|w| parse_vec(w, &format!("vertex {} d_basis", m.vertex))).collect(),
            None => Err(Error::Parse(format!("vertex {}: d_basis missing", m.vertex))),
        })
        .collect::<Result<Vec<_>>>();
    let y = match bases {
        Ok(b) => YPart::new(s, ymods, Some(b))?,
        Err(_) if ydocs.iter().all(|m| m.d_basis.is_none()) => YPart::new(s, ymods, None)?,
        Err(e) => return Err(e),
    };
    let etadocs = ordered(&d.eta, &xids, |e| &e.vertex, "eta")?;
    let eta = etadocs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let fd = crate::extcat::fy_dim(s, &y, i);
            matrix_from_doc(&e.matrix, x[i].dim(), fd, &format!("eta at {}", e.vertex))
        })
        .collect::<Result<Vec<_>>>()?;
    TripleObject::new(s.clone(), x, y, eta)
}

pub fn parse_object(text: &str, s: &Arc<SpeciesScenario>) -> Result<TripleObject> {
    let doc: ObjectDoc = serde_json::from_str(text).map_err(|e| Error::Parse(format!("object: {e}")))?;
    object_from_doc(&doc, s)
}

pub fn object_to_json(z: &TripleObject) -> String {
    serde_json::to_string_pretty(&object_to_doc(z)).expect("serializable")
}

/// An operator file: either a bare matrix or `{"matrix": [...]}`.
pub fn parse_operator(text: &str) -> Result<RatMatrix> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("operator: {e}")))?;
    let m = match &v {
        serde_json::Value::Object(o) => o.get("matrix").cloned().ok_or_else(|| Error::Parse("operator: missing \"matrix\"".into()))?,
        _ => v,
    };
    let doc: MatrixDoc = serde_json::from_value(m).map_err(|e| Error::Parse(format!("operator: {e}")))?;
    let rows = doc.len();
    let cols = doc.first().map_or(0, Vec::len);
    matrix_from_doc(&doc, rows, cols, "operator")
}
