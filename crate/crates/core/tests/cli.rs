use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn isocat(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_isocat")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = isocat(&a);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("isocat-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn classify_exit_codes() {
    let (code, v) = json(&["classify", "--scenario", "catalog:d4_elliptic"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "isocat.report/1");
    assert_eq!(v["verdict"], "finite");
    assert_eq!(v["diagram"], "D4");
    let (code, v) = json(&["classify", "--scenario", "catalog:two_surfaces"]);
    assert_eq!(code, 3);
    assert_eq!(v["verdict"], "infinite");

    let bad = scratch("bad.json", "{\"name\": \"x\", \"x_vertices\": [");
    let (code, _, err) = isocat(&["classify", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.json"), "{err}");
    assert_eq!(isocat(&["classify", "--scenario", "catalog:nope"]).0, 2);
    assert_eq!(isocat(&["frobnicate"]).0, 2);
}

#[test]
fn ext_reports() {
    // across the pair: no maps, extensions counted by the bimodule
    let (code, v) = json(&["ext", "--scenario", "catalog:two_surfaces", "--object", "simple:A1", "--object", "simple:k"]);
    assert_eq!(code, 0);
    assert_eq!((v["hom"].as_u64(), v["ext1"].as_u64()), (Some(0), Some(2)));
    let (_, v) = json(&["ext", "--scenario", "catalog:g2_threefold", "--object", "simple:A1", "--object", "simple:A1"]);
    assert!(v["hom"].as_u64().unwrap() >= 1);
    let (_, v) = json(&["ext", "--scenario", "catalog:c3_surface", "--object", "universal:A2", "--object", "simple:k"]);
    assert_eq!(v["ext1"], 0);
    let (code, _, _) = isocat(&["ext", "--scenario", "catalog:a2", "--object", "simple:k"]);
    assert_eq!(code, 2);
    let (code, _, _) = isocat(&["ext", "--scenario", "catalog:a2", "--object", "simple:zz", "--object", "simple:k"]);
    assert_eq!(code, 2);
}

#[test]
fn object_files_round_trip_through_the_cli() {
    let (code, v) = json(&["indec", "--scenario", "catalog:d4_elliptic", "--root", "2,1,1,1", "--seed", "4"]);
    assert_eq!(code, 0);
    let obj = &v["indecomposables"][0]["object"];
    let path = scratch("top.json", &serde_json::to_string(obj).unwrap());
    let p = path.to_str().unwrap();
    let (code, v) = json(&["decompose", "--scenario", "catalog:d4_elliptic", "--object", p]);
    assert_eq!(code, 0);
    assert_eq!(v["flag"], "certified");
    assert_eq!(v["summands"].as_array().unwrap().len(), 1);
    let (code, v) = json(&["resolve", "--scenario", "catalog:d4_elliptic", "--object", p]);
    assert_eq!(code, 0);
    assert_eq!(v["dims"]["z"], serde_json::json!([2, 1, 1, 1]));
    // wrong scenario for the file
    assert_eq!(isocat(&["decompose", "--scenario", "catalog:a2", "--object", p]).0, 2);
    // randomized commands insist on a seed
    assert_eq!(isocat(&["indec", "--scenario", "catalog:a2"]).0, 2);
}

#[test]
fn roots_center_witt() {
    let (_, v) = json(&["roots", "--scenario", "catalog:g2_threefold"]);
    assert_eq!(v["count"], 6);
    let (code, _) = json(&["roots", "--scenario", "catalog:two_surfaces"]);
    assert_eq!(code, 3);
    let (_, v) = json(&["center", "--scenario", "catalog:d4_elliptic"]);
    assert_eq!(v["dim"], 1);

    let op = scratch("op.json", r#"{"matrix": [["0","1","0"],["0","0","1"],["0","0","0"]]}"#);
    let other = scratch("op2.json", r#"[["0","0","0"],["1","0","0"],["0","1","0"]]"#);
    let (code, v) = json(&["witt", "--op", op.to_str().unwrap(), "--other", other.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["partition"], serde_json::json!([3]));
    assert_eq!(v["isomorphic"], true);
    let bad = scratch("op3.json", r#"[["1","0"],["0","0"]]"#);
    assert_eq!(isocat(&["witt", "--op", bad.to_str().unwrap()]).0, 2);
    let (_, out, _) = isocat(&["witt", "--partition", "(2,2,1)"]);
    assert!(out.starts_with("(2,2,1) realized on Q^5"), "{out}");
}

#[test]
fn check_command() {
    let (code, v) = json(&["check", "--scenario", "catalog:c3_surface", "--seed", "7", "--samples", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 9);
    let tampered = scratch(
        "tampered.json",
        r#"{"name":"t","x_vertices":[{"id":"k","algebra":{"kind":"structure_constants",
            "labels":["1","x","y"],
            "constants":[[["1","0","0"],["0","1","0"],["0","0","1"]],
                         [["0","1","0"],["0","0","1"],["1","0","0"]],
                         [["0","0","1"],["0","0","0"],["0","0","0"]]],
            "unit":["1","0","0"],"certification":"asserted-division"}}],
            "y_vertices":[],"bimodules":[]}"#,
    );
    let (code, _, err) = isocat(&["check", "--scenario", tampered.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("invalid algebra"), "{err}");
}
