//! Batch commands behind the `isocat` binary.
//!
//! Exit codes: 0 success (or finite type), 1 invariant failure, 2 input
//! error, 3 infinite type.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog;
use crate::checks;
use crate::error::{Error, Result};
use crate::extcat::{
    decompose, euler_form, ext1, hom, is_projective, projective_resolution, universal_extension, ObjRef, TripleObject,
};
use crate::format::{matrix_doc, object_to_doc, parse_object, parse_operator, parse_scenario};
use crate::reptype::{classify, construct_indecomposable, indecomposable_vectors, Verdict};
use crate::species::{ring_center, SpeciesScenario};
use crate::wittmod::{intertwiners, realize_partition, witt_partition, VModule, WittPartition};

pub const REPORT_SCHEMA: &str = "isocat.report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFINITE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "isocat", version, about = "Exact computations with triples over Q-species")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file, or `catalog:ID`
    #[arg(long)]
    scenario: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Representation type, valued diagram and edge labels
    Classify(Common),
    /// Hom and Ext^1 dimensions between two objects
    Ext {
        #[command(flatten)]
        common: Common,
        /// Object file, `simple:VERTEX`, `universal:VERTEX` or `root:a,b,..` (twice)
        #[arg(long, num_args = 1)]
        object: Vec<String>,
    },
    /// Positive roots of the valued graph
    Roots(Common),
    /// Certified indecomposables, one per positive root or for `--root`
    Indec {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        root: Option<String>,
    },
    /// Length-one projective resolution of an object
    Resolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        object: String,
    },
    /// Center of the triangular ring
    Center(Common),
    /// Decomposition into indecomposable summands
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        object: String,
    },
    /// Jordan partition of a nilpotent operator, or a realization of a partition
    Witt {
        #[arg(long)]
        op: Option<String>,
        #[arg(long)]
        partition: Option<String>,
        /// Second operator: decide isomorphism with `--op`
        #[arg(long)]
        other: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the randomized invariant suites
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

/// What a command printed and how it ended.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Consistency(_) | Error::RetryBudgetExhausted { .. } => EXIT_INVARIANT,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

pub fn load_scenario(spec: &str) -> Result<SpeciesScenario> {
    if let Some(id) = spec.strip_prefix("catalog:") {
        return catalog::get(id);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    parse_scenario(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{spec}: {m}")),
        other => other,
    })
}

/// Resolves an object argument: a file, `simple:V`, `universal:V` (the
/// universal extension of the simple at y-vertex V) or `root:a,b,..`.
pub fn load_object(s: &Arc<SpeciesScenario>, spec: &str, seed: Option<u64>) -> Result<ObjRef> {
    let vertex = |id: &str| -> Result<(bool, usize)> {
        if let Some(i) = s.x_index(id) {
            Ok((true, i))
        } else if let Some(j) = s.y_index(id) {
            Ok((false, j))
        } else {
            Err(Error::Parse(format!("no vertex {id:?} in scenario {}", s.name())))
        }
    };
    if let Some(id) = spec.strip_prefix("simple:") {
        let z = match vertex(id)? {
            (true, i) => TripleObject::simple_x(s, i),
            (false, j) => TripleObject::simple_y(s, j),
        };
        return Ok(Arc::new(z));
    }
    if let Some(id) = spec.strip_prefix("universal:") {
        return match vertex(id)? {
            (false, j) => Ok(Arc::new(universal_extension(s, TripleObject::simple_y(s, j).y()))),
            (true, _) => Err(Error::Parse(format!("{id} is not a y-vertex"))),
        };
    }
    if let Some(r) = spec.strip_prefix("root:") {
        let root = parse_root(r)?;
        let seed = seed.ok_or_else(|| Error::Parse("root: objects are sampled; pass --seed".into()))?;
        return Ok(construct_indecomposable(s, &root, seed)?.object);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    Ok(Arc::new(parse_object(&text, s)?))
}

fn parse_root(r: &str) -> Result<Vec<usize>> {
    r.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad root entry {p:?}"))))
        .collect()
}

fn report(format: Format, command: &str, body: Value, text: String, code: i32) -> Outcome {
    let stdout = match format {
        Format::Text => text,
        Format::Json => {
            let mut doc = json!({ "schema": REPORT_SCHEMA, "command": command });
            if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
                d.extend(b);
            }
            serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
        }
    };
    Outcome { code, stdout, stderr: String::new() }
}

fn need_seed(c: &Common) -> Result<u64> {
    c.seed.ok_or_else(|| Error::Parse("this command samples at random; pass --seed".into()))
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Classify(c) => cmd_classify(&c),
        Command::Ext { common, object } => cmd_ext(&common, &object),
        Command::Roots(c) => cmd_roots(&c),
        Command::Indec { common, root } => cmd_indec(&common, root.as_deref()),
        Command::Resolve { common, object } => cmd_resolve(&common, &object),
        Command::Center(c) => cmd_center(&c),
        Command::Decompose { common, object } => cmd_decompose(&common, &object),
        Command::Witt { op, partition, other, format } => cmd_witt(op.as_deref(), partition.as_deref(), other.as_deref(), format),
        Command::Check { common, samples } => cmd_check(&common, samples),
    }
}

fn cmd_classify(c: &Common) -> Result<Outcome> {
    let s = load_scenario(&c.scenario)?;
    let cl = classify(&s)?;
    let labels: Vec<Value> = cl.labels.iter().map(|(a, b, (p, q))| json!({ "a": a, "b": b, "value": [p, q] })).collect();
    let conds: Vec<Value> = cl
        .conditions
        .iter()
        .map(|v| json!({ "vertex": v.vertex, "g": v.g, "n_i": v.n_i, "n": v.n, "label": [v.label.0, v.label.1], "label_matches": v.label_matches }))
        .collect();
    let mut text = format!("scenario {}\nverdict {}\ndiagram {}\nfrt_case {}\n", s.name(), cl.verdict.as_str(), cl.diagram, cl.frt_case);
    for (a, b, (p, q)) in &cl.labels {
        let _ = writeln!(text, "edge {a} -- {b} ({p},{q})");
    }
    for v in &cl.conditions {
        let _ = writeln!(text, "vertex {} g={} n_i={} n={} label=({},{}) {}", v.vertex, v.g, v.n_i, v.n, v.label.0, v.label.1, if v.label_matches { "ok" } else { "MISMATCH" });
    }
    let code = if cl.verdict == Verdict::Finite { EXIT_OK } else { EXIT_INFINITE };
    let body = json!({
        "scenario": s.name(),
        "verdict": cl.verdict.as_str(),
        "diagram": cl.diagram,
        "frt_case": cl.frt_case.to_string(),
        "labels": labels,
        "conditions": conds,
    });
    Ok(report(c.format, "classify", body, text, code))
}

fn cmd_ext(c: &Common, objects: &[String]) -> Result<Outcome> {
    if objects.len() != 2 {
        return Err(Error::Parse(format!("ext takes exactly two --object arguments, got {}", objects.len())));
    }
    let s = Arc::new(load_scenario(&c.scenario)?);
    let a = load_object(&s, &objects[0], c.seed)?;
    let b = load_object(&s, &objects[1], c.seed)?;
    let h = hom(&a, &b)?.len();
    let e = ext1(&a, &b)?;
    let euler = euler_form(&a, &b)?;
    let text = format!(
        "dim Hom {h}\ndim Ext1 {}\neuler {euler} (psi {} -> {}, rank {}) ok\n",
        e.dim, e.psi_domain_dim, e.psi_codomain_dim, e.psi_rank
    );
    let body = json!({
        "hom": h,
        "ext1": e.dim,
        "euler": euler,
        "psi": { "domain": e.psi_domain_dim, "codomain": e.psi_codomain_dim, "rank": e.psi_rank },
        "euler_check": true,
    });
    Ok(report(c.format, "ext", body, text, EXIT_OK))
}

fn cmd_roots(c: &Common) -> Result<Outcome> {
    let s = load_scenario(&c.scenario)?;
    let cl = classify(&s)?;
    if cl.verdict == Verdict::Infinite {
        let text = format!("{} is of infinite type; no finite root system\n", s.name());
        return Ok(report(c.format, "roots", json!({ "verdict": "infinite", "roots": Value::Null }), text, EXIT_INFINITE));
    }
    let roots = indecomposable_vectors(&s)?;
    let mut text = format!("vertices {}\n{} positive roots ({})\n", s.vertex_ids().join(" "), roots.len(), cl.diagram);
    for r in &roots {
        let _ = writeln!(text, "{r:?}");
    }
    let body = json!({ "diagram": cl.diagram, "vertices": s.vertex_ids(), "count": roots.len(), "roots": roots });
    Ok(report(c.format, "roots", body, text, EXIT_OK))
}

fn cmd_indec(c: &Common, root: Option<&str>) -> Result<Outcome> {
    let s = Arc::new(load_scenario(&c.scenario)?);
    let seed = need_seed(c)?;
    let roots = match root {
        Some(r) => vec![parse_root(r)?],
        None => indecomposable_vectors(&s)?,
    };
    let mut text = String::new();
    let mut entries = Vec::new();
    for (k, r) in roots.iter().enumerate() {
        let con = construct_indecomposable(&s, r, seed.wrapping_add(k as u64))?;
        let _ = writeln!(text, "{r:?} certified after {} attempt(s)", con.attempts);
        entries.push(json!({
            "root": r,
            "attempts": con.attempts,
            "certified": con.certified,
            "object": serde_json::to_value(object_to_doc(&con.object)).expect("object serializes"),
        }));
    }
    Ok(report(c.format, "indec", json!({ "seed": seed, "indecomposables": entries }), text, EXIT_OK))
}

fn dims(z: &TripleObject) -> Vec<usize> {
    z.dim_vector()
}

fn cmd_resolve(c: &Common, object: &str) -> Result<Outcome> {
    let s = Arc::new(load_scenario(&c.scenario)?);
    let z = load_object(&s, object, c.seed)?;
    let r = projective_resolution(&z)?;
    let text = format!(
        "0 -> P1 {:?} -> P0 {:?} -> Z {:?} -> 0\nP1 projective {}\nP0 projective {}\nZ projective {}\n",
        dims(&r.p1),
        dims(&r.p0),
        dims(&z),
        is_projective(&r.p1),
        is_projective(&r.p0),
        is_projective(&z)
    );
    let body = json!({
        "p1": serde_json::to_value(object_to_doc(&r.p1)).expect("serializes"),
        "p0": serde_json::to_value(object_to_doc(&r.p0)).expect("serializes"),
        "d1": { "u": r.d1.u().iter().map(matrix_doc).collect::<Vec<_>>(), "v": r.d1.v().iter().map(matrix_doc).collect::<Vec<_>>() },
        "d0": { "u": r.d0.u().iter().map(matrix_doc).collect::<Vec<_>>(), "v": r.d0.v().iter().map(matrix_doc).collect::<Vec<_>>() },
        "dims": { "p1": dims(&r.p1), "p0": dims(&r.p0), "z": dims(&z) },
        "z_projective": is_projective(&z),
    });
    Ok(report(c.format, "resolve", body, text, EXIT_OK))
}

fn cmd_center(c: &Common) -> Result<Outcome> {
    let s = load_scenario(&c.scenario)?;
    let z = ring_center(&s);
    let text = format!("center of the triangular ring of {}: dimension {}\n", s.name(), z.dim());
    Ok(report(c.format, "center", json!({ "scenario": s.name(), "dim": z.dim() }), text, EXIT_OK))
}

fn cmd_decompose(c: &Common, object: &str) -> Result<Outcome> {
    let s = Arc::new(load_scenario(&c.scenario)?);
    let z = load_object(&s, object, c.seed)?;
    let d = decompose(&z)?;
    d.verify(&z)?;
    let mut text = format!("{} summand(s), {}\n", d.summands.len(), d.flag());
    for p in &d.summands {
        let _ = writeln!(text, "{:?} {}", p.object.dim_vector(), if p.certified { "certified" } else { "uncertified" });
    }
    let parts: Vec<Value> = d
        .summands
        .iter()
        .map(|p| {
            json!({
                "dims": p.object.dim_vector(),
                "certified": p.certified,
                "object": serde_json::to_value(object_to_doc(&p.object)).expect("serializes"),
            })
        })
        .collect();
    Ok(report(c.format, "decompose", json!({ "flag": d.flag(), "summands": parts }), text, EXIT_OK))
}

fn read_operator(path: &str) -> Result<VModule> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    VModule::new(parse_operator(&text)?)
}

fn cmd_witt(op: Option<&str>, partition: Option<&str>, other: Option<&str>, format: Format) -> Result<Outcome> {
    match (op, partition) {
        (Some(path), None) => {
            let m = read_operator(path)?;
            let p = witt_partition(&m);
            let mut text = format!("partition {p}\n");
            let mut body = json!({ "dim": m.dim(), "partition": p.parts() });
            if let Some(o) = other {
                let n = read_operator(o)?;
                let q = witt_partition(&n);
                let iso = p == q && witness(&m, &n);
                let _ = writeln!(text, "other {q}\nisomorphic {iso}");
                body["other"] = json!(q.parts());
                body["isomorphic"] = json!(iso);
            }
            Ok(report(format, "witt", body, text, EXIT_OK))
        }
        (None, Some(p)) => {
            let p = WittPartition::parse(p)?;
            let m = realize_partition(&p);
            let text = format!("{p} realized on Q^{}\n{:?}\n", m.dim(), m.op());
            Ok(report(format, "witt", json!({ "partition": p.parts(), "operator": matrix_doc(m.op()) }), text, EXIT_OK))
        }
        _ => Err(Error::Parse("witt takes exactly one of --op or --partition".into())),
    }
}

/// Searches the intertwiner space for an invertible element.
pub fn witness(a: &VModule, b: &VModule) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let basis = intertwiners(a, b);
    let mut rng = checks::rng(0x5eed);
    (0..2 * basis.len() + 8).any(|_| {
        use rand::Rng;
        let t = basis.iter().fold(crate::exactalg::RatMatrix::zeros(b.dim(), a.dim()), |acc, h| {
            &acc + &h.scale(&crate::exactalg::Q::from_integer(rng.gen_range(-5i64..=5).into()))
        });
        t.is_invertible()
    })
}

fn cmd_check(c: &Common, samples: usize) -> Result<Outcome> {
    let s = Arc::new(load_scenario(&c.scenario)?);
    let seed = need_seed(c)?;
    let reports = checks::run_all(&s, seed, samples);
    let ok = reports.iter().all(|r| r.ok());
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{:<26} {}/{} {}", r.name, r.passed, r.total, if r.ok() { "pass" } else { "FAIL" });
    }
    for r in reports.iter().filter(|r| !r.ok()) {
        let _ = writeln!(text, "counterexample for {}:\n{}", r.name, r.counterexample.as_deref().unwrap_or(""));
    }
    let suites: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "name": r.name, "passed": r.passed, "total": r.total, "counterexample": r.counterexample }))
        .collect();
    let body = json!({ "scenario": s.name(), "seed": seed, "samples": samples, "all_passed": ok, "suites": suites });
    Ok(report(c.format, "check", body, text, if ok { EXIT_OK } else { EXIT_INVARIANT }))
}
