mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{fixture_rows, p_b, p_u};
use p3net::quantum::DensityMatrix;
use p3net::strategy::{BehaviourPoint, Representation};
use serde_json::Value;

fn p3net(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p3net")).args(args).output().unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = p3net(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_of(args)).unwrap()
}

fn error_of(args: &[&str]) -> Value {
    let out = p3net(args);
    assert!(!out.status.success(), "{args:?} should fail");
    serde_json::from_slice(&out.stderr).unwrap()
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn coords(v: &Value) -> Vec<f64> {
    v["coords"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn vertices_csv_matches_fixtures() {
    for (rep, flag) in [(Representation::Full26, "full"), (Representation::Reduced8, "reduced")] {
        let text = stdout_of(&["vertices", "--rep", flag, "--format", "csv"]);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap().split(',').count(), rep.dim());
        let rows: Vec<Vec<u8>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
        assert_eq!(rows, fixture_rows(rep));
    }
}

#[test]
fn vertices_json_has_full_table() {
    let v = json_of(&["vertices", "--rep", "full", "--format", "json"]);
    let rows = v["vertices"].as_array().unwrap();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 26));
    assert_eq!(v["representation"], "full-26");
}

#[test]
fn graph_dot_counts() {
    let dot = stdout_of(&["graph", "--rep", "full", "--format", "dot"]);
    assert_eq!(dot.matches(" -- ").count(), 864);
    let nodes = dot.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("--")).count();
    assert_eq!(nodes, 64);
}

#[test]
fn svd_layout_is_deterministic() {
    let args = ["graph", "--rep", "reduced", "--layout", "svd"];
    let first = stdout_of(&args);
    assert_eq!(first, stdout_of(&args));
    let v: Value = serde_json::from_str(&first).unwrap();
    let layout = v["layout"].as_array().unwrap();
    assert_eq!(layout.len(), 16);
    assert!(layout.iter().all(|r| r.as_array().unwrap().len() == 3));

    let csv = stdout_of(&["graph", "--rep", "reduced", "--layout", "svd", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn analyze_full_report() {
    let v = json_of(&["analyze", "--rep", "full"]);
    assert_eq!(v["apsp_max"], 2);
    assert_eq!(v["min_generators"], 4);
    assert_eq!(v["generators"]["witness"].as_array().unwrap().len(), 4);
    assert_eq!(v["generators"]["smaller_exists"], false);
    assert_eq!(v["generators"]["coverage"]["total"], 64);
    let uniform = &v["uniform_classification"];
    assert_eq!((uniform["coincident"].as_u64(), uniform["visible"].as_u64(), uniform["hidden"].as_u64()), (Some(1), Some(27), Some(36)));
    assert_eq!(v["classification"].as_array().unwrap().len(), 64);
    assert_eq!(v["cliques"]["count"], 8);
    let hist = v["hamming_histogram"].as_object().unwrap();
    let total: u64 = hist.values().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(total, 64);
}

#[test]
fn analyze_reduced_report() {
    let v = json_of(&["analyze", "--rep", "reduced"]);
    assert_eq!(v["apsp_max"], 2);
    assert_eq!(v["min_generators"], 4);
    assert_eq!(v["edge_count"], 48);
}

#[test]
fn simulate_exact_points() {
    let honest = json_of(&["simulate", "--kind", "honest", "--noise", "0", "--shots", "0"]);
    let got = BehaviourPoint::reduced(coords(&honest["exact"]).try_into().unwrap()).unwrap();
    assert!(got.approx_eq(&p_b(), 1e-12));
    assert!(honest.get("sampled").is_none());
    assert_eq!(honest["no_signalling"]["holds"], true);

    let exact = json_of(&["simulate", "--kind", "intercepted", "--shots", "0", "--emit", "exact"]);
    let got = BehaviourPoint::reduced(coords(&exact).try_into().unwrap()).unwrap();
    assert!(got.approx_eq(&p_u(), 1e-12));
}

#[test]
fn simulate_sampled_point() {
    let v = json_of(&["simulate", "--kind", "honest", "--shots", "100000", "--seed", "7", "--emit", "sampled"]);
    let sampled = coords(&v["point"]);
    for (x, p) in sampled.iter().zip(&p_b().coords) {
        let se = (p * (1.0 - p) / 1e5).sqrt();
        assert!((x - p).abs() <= 5.0 * se);
    }
    assert_eq!(v["seed"], 7);
    let again = json_of(&["simulate", "--kind", "honest", "--shots", "100000", "--seed", "7", "--emit", "sampled"]);
    assert_eq!(v, again);
}

#[test]
fn test_point_mode() {
    let dir = tempfile::tempdir().unwrap();
    let expected = write_json(dir.path(), "pb.json", &p_b());
    let uncorrelated = write_json(dir.path(), "pu.json", &p_u());
    let noisy = dir.path().join("noisy.json");
    let noisy = noisy.to_str().unwrap();
    stdout_of(&["simulate", "--kind", "honest", "--emit", "perturbed", "--perturb", "0.05", "--seed", "3", "-o", noisy]);

    let same = json_of(&["test", "--expected", &expected, "--observed", noisy, "--seed", "1"]);
    assert_eq!(same["reject"], false);
    assert_eq!(same["alternative"], "two-sided");
    let diff = json_of(&["test", "--expected", &expected, "--observed", &uncorrelated, "--seed", "1"]);
    assert_eq!(diff["reject"], true);
    assert!(diff["manifold"]["normalized_score"].as_f64().unwrap().abs() < 1e-8);
    let ident = json_of(&["test", "--expected", &expected, "--observed", &expected, "--seed", "1"]);
    assert_eq!(ident["z"], 0.0);
    assert_eq!(ident["reject"], false);
    assert!((ident["manifold"]["normalized_score"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn test_requires_seed() {
    let dir = tempfile::tempdir().unwrap();
    let expected = write_json(dir.path(), "pb.json", &p_b());
    let err = error_of(&["test", "--expected", &expected, "--observed", &expected]);
    assert_eq!(err["error"]["kind"], "invalid_argument");
}

#[test]
fn test_sample_mode() {
    let dir = tempfile::tempdir().unwrap();
    let rows = |center: &BehaviourPoint, offset: usize| -> String {
        (0..40)
            .map(|i| {
                center
                    .coords
                    .iter()
                    .enumerate()
                    .map(|(k, x)| format!("{}", x + 0.01 * (((i * 7 + k * 3 + offset) % 11) as f64 - 5.0) / 5.0))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    std::fs::write(&a, rows(&p_b(), 0)).unwrap();
    std::fs::write(&b, rows(&p_u(), 0)).unwrap();
    std::fs::write(&c, rows(&p_b(), 0)).unwrap();
    let (a, b, c) = (a.to_str().unwrap(), b.to_str().unwrap(), c.to_str().unwrap());
    let diff = json_of(&["test", "--mode", "samples", "--expected", a, "--observed", b, "--seed", "5"]);
    assert_eq!(diff["reject"], true);
    assert_eq!(diff["coordinates"].as_array().unwrap().len(), 8);
    let same = json_of(&["test", "--mode", "samples", "--expected", a, "--observed", c, "--seed", "5"]);
    assert_eq!(same["reject"], false);
}

#[test]
fn bound_reports() {
    let dir = tempfile::tempdir().unwrap();
    let bell = write_json(dir.path(), "bell.json", &DensityMatrix::phi_plus().to_json());
    let mixed = write_json(dir.path(), "mixed.json", &DensityMatrix::maximally_mixed(4).to_json());

    let same = json_of(&["bound", "--rho", &bell, "--sigma", &bell]);
    assert_eq!(same["holds"], true);
    assert!(same["behaviour"]["l1"].as_f64().unwrap().abs() < 1e-12);
    assert!(same["behaviour"]["rhs"].as_f64().unwrap().abs() < 1e-9);

    let v = json_of(&["bound", "--rho", &bell, "--sigma", &mixed]);
    assert!((v["behaviour"]["l1"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["holds"], true);

    let mut bad = DensityMatrix::maximally_mixed(4).to_json();
    for i in 0..4 {
        bad.re[i][i] = 0.225;
    }
    let bad = write_json(dir.path(), "bad.json", &bad);
    let err = error_of(&["bound", "--rho", &bad, "--sigma", &bell]);
    assert_eq!(err["error"]["kind"], "invalid_state");
    assert!(err["error"]["message"].as_str().unwrap().contains("trace ≠ 1"));
}

#[test]
fn project_command() {
    let dir = tempfile::tempdir().unwrap();
    let pb = write_json(dir.path(), "pb.json", &p_b());
    let v = json_of(&["project", "--input", &pb, "--reference", &pb]);
    assert!((v["distance"].as_f64().unwrap() - 0.30304).abs() < 1e-4);
    assert_eq!(v["converged"], true);
    assert_eq!(v["normalized_score"], 1.0);
    for key in ["params", "point", "distance", "squared_distance", "iterations", "converged"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let bare = dir.path().join("bare.json");
    std::fs::write(&bare, "[0.5,0.5,0.5,0.5,0.25,0.25,0.25,0.25]").unwrap();
    let v = json_of(&["project", "--input", bare.to_str().unwrap()]);
    assert!(v["distance"].as_f64().unwrap() < 1e-12);
}

#[test]
fn file_output_is_byte_identical_and_atomic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for path in [&first, &second] {
        stdout_of(&["simulate", "--shots", "1000", "--seed", "9", "-o", path.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());

    let failed = dir.path().join("never.json");
    let err = error_of(&["simulate", "--noise", "2", "-o", failed.to_str().unwrap()]);
    assert!(err["error"]["kind"].is_string());
    assert!(!failed.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn usage_errors_are_structured() {
    let err = error_of(&["vertices", "--rep", "sideways"]);
    assert_eq!(err["error"]["kind"], "usage");
    let err = error_of(&["vertices", "--format", "dot"]);
    assert_eq!(err["error"]["kind"], "invalid_argument");
    let err = error_of(&["project", "--input", "/nonexistent/point.json"]);
    assert_eq!(err["error"]["kind"], "io");
}
