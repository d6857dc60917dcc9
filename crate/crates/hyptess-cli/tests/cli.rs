use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hyptess(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyptess")).args(args).output().expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = hyptess(&all);
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}; stderr: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyptess-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn row_value(report: &Value, label: &str) -> Value {
    report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r[0] == label)
        .unwrap_or_else(|| panic!("no row {label}"))[1]
        .clone()
}

#[test]
fn published_tables_pass() {
    for cmd in ["constants", "table1", "table2", "verify-main"] {
        let (code, v) = json_report(&[cmd]);
        assert_eq!(code, 0, "{cmd}");
        assert_eq!(v["passed"], true);
        assert!(v["assertions"].as_array().unwrap().iter().all(|a| a["pass"] == true));
    }
}

#[test]
fn tree_table_has_na_cells_where_inapplicable() {
    let (_, v) = json_report(&["table2"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let na: usize = rows.iter().map(|r| r.as_array().unwrap().iter().filter(|c| *c == "N/A").count()).sum();
    assert_eq!(na, 4);
    let best: Vec<f64> = rows.iter().map(|r| r[6].as_f64().unwrap()).collect();
    for (b, p) in best.iter().zip([1.17816, 1.71113, 1.15527, 1.24735]) {
        assert!((b - p).abs() <= 2e-5);
    }
}

#[test]
fn tight_tolerance_fails_with_status_one() {
    let out = hyptess(&["table1", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn csv_output_has_header_and_rows() {
    let out = hyptess(&["table2", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "tree,Basic,Case 1,Case 2A,Case 2B,Case 3,best");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("\"T(3,4*)\",1.00510487"));
}

#[test]
fn sampled_check_is_reproducible() {
    let args = ["verify-inj-to-cov", "--grid", "3", "--samples", "5", "--seed", "11"];
    let (code, a) = json_report(&args);
    let (_, b) = json_report(&args);
    assert_eq!(code, 0);
    assert_eq!(a["rows"], b["rows"]);
    assert_eq!(a["assertions"], b["assertions"]);
    // The seed is mandatory.
    assert_eq!(hyptess(&["verify-inj-to-cov", "--grid", "3"]).status.code(), Some(2));
}

#[test]
fn surface_lift_tessellates_into_triangles() {
    let sites = scratch("alpha-sites.json");
    let (code, s) = json_report(&["surface", "alpha", "--sites", sites.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(row_value(&s, "triangles"), 6);
    let complex = scratch("alpha-complex.json");
    let svg = scratch("alpha.svg");
    let (code, t) = json_report(&[
        "tessellate",
        sites.to_str().unwrap(),
        "--clip",
        "6",
        "--output",
        complex.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(row_value(&t, "quadrilaterals"), 0);
    assert_eq!(row_value(&t, "faces with five or more sides"), 0);
    assert_eq!(row_value(&t, "triangles"), row_value(&t, "Delaunay faces"));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(complex).unwrap()).unwrap();
    assert!(!c["faces"].as_array().unwrap().is_empty());
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn deformed_surface_has_one_noncentered_class() {
    let (code, s) = json_report(&["surface", "t", "--t", "-0.01"]);
    assert_eq!(code, 0);
    assert_eq!(row_value(&s, "non-centered edges"), 1);
    assert_eq!(hyptess(&["surface", "t"]).status.code(), Some(2));
    assert_eq!(hyptess(&["surface", "alpha", "--t", "0.1"]).status.code(), Some(2));
}

fn spiral_points(n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|i| {
            let r = 2.5 * ((i as f64 + 0.5) / n as f64).sqrt();
            let a = i as f64 * 2.399_963_229_728_653;
            [r.cosh(), r.sinh() * a.cos(), r.sinh() * a.sin()]
        })
        .collect()
}

#[test]
fn thirty_point_set_satisfies_empty_circumdisks() {
    let path = scratch("spiral.json");
    let doc = serde_json::json!({"model": "hyperboloid", "points": spiral_points(30)});
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, t) = json_report(&["tessellate", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(row_value(&t, "sites"), 30);
    let a = t["assertions"].as_array().unwrap();
    assert!(a.iter().any(|c| c["name"] == "empty circumdisk violation" && c["pass"] == true));
    assert_eq!(t["inputs"][0][1].as_str().unwrap().len(), 64);
}

#[test]
fn duplicate_points_are_rejected() {
    let path = scratch("dup.json");
    let mut pts = spiral_points(6);
    pts.push(pts[2]);
    std::fs::write(&path, serde_json::json!({"model": "hyperboloid", "points": pts}).to_string()).unwrap();
    let out = hyptess(&["tessellate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coincide"));
    assert_eq!(hyptess(&["tessellate", "/nonexistent/points.json"]).status.code(), Some(2));
}

#[test]
fn tree_bound_from_json() {
    let d1 = 15.0166f64.acosh();
    let r1 = 2.8298f64.acosh();
    let f = |v: usize| serde_json::json!({"vertex": v, "bound": d1});
    let tree = serde_json::json!({
        "vertices": [{"id": 7, "root": false}, {"id": 9, "root": true}],
        "edges": [[7, 9]],
        "frontier": [f(7), f(7), f(9), f(9), f(9)],
    });
    let path = scratch("tree.json");
    std::fs::write(&path, tree.to_string()).unwrap();
    let (code, v) = json_report(&["tree-bound", path.to_str().unwrap(), &r1.to_string()]);
    assert_eq!(code, 0);
    assert!((row_value(&v, "best").as_f64().unwrap() - 1.17816).abs() < 2e-5);
    assert_eq!(row_value(&v, "Case 3"), "N/A");

    let bad = scratch("bad-tree.json");
    std::fs::write(&bad, r#"{"vertices":[],"edges":[],"frontier":[]}"#).unwrap();
    assert_eq!(hyptess(&["tree-bound", bad.to_str().unwrap(), "1.0"]).status.code(), Some(2));
}
