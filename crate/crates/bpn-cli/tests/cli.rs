use std::path::Path;
use std::process::{Command, Output};

use bpn::{Graph, SignedPerm};
use serde_json::Value;

const S3: [&str; 4] = ["1,2,3", "-1,-2,3", "2,1,3", "-3,-2,-1"];

fn bpn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bpn")).args(args).env_remove("BPN_MAX_N").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn trees_args<'a>(n: &'a str, s: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    let mut a = vec!["trees", n, "--s"];
    a.extend_from_slice(s);
    a.extend_from_slice(extra);
    a
}

fn write_family(dir: &Path) -> std::path::PathBuf {
    let p = dir.join("fam.json");
    let o = bpn(&trees_args("3", &S3, &["--out", p.to_str().unwrap()]));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    p
}

#[test]
fn props_reports_counts_and_girth() {
    let o = bpn(&["props", "3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("48 vertices, 72 edges"), "{out}");
    assert!(out.contains("girth 8"), "{out}");
    assert!(!out.contains("FAIL"));
    let o = bpn(&["props", "--n", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"], 8);
    assert_eq!(v["ok"], true);
}

#[test]
fn props_rejects_bad_dimension() {
    assert_eq!(code(&bpn(&["props", "1"])), 2);
    assert_eq!(code(&bpn(&["props"])), 2);
    assert_eq!(code(&bpn(&["props", "x"])), 2);
    assert_eq!(code(&bpn(&["props", "3", "--n", "4"])), 2);
    assert_eq!(code(&bpn(&["frobnicate"])), 2);
}

#[test]
fn trees_emit_two_verified_trees() {
    let o = bpn(&trees_args("3", &S3, &[]));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["trees"].as_array().unwrap().len(), 2);
    assert_eq!(v["s"][1], serde_json::json!([-1, -2, 3]));
    assert_eq!(v["repaired"], false);
    assert!(v["case_trace"][0].as_str().is_some());
    let first_edge = &v["trees"][0]["edges"][0];
    assert_eq!(first_edge.as_array().unwrap().len(), 2);
    assert_eq!(first_edge[0].as_array().unwrap().len(), 3);
}

#[test]
fn trees_reject_bad_terminals() {
    assert_eq!(code(&bpn(&trees_args("3", &["1,2,3", "1,2,3", "2,1,3", "-3,-2,-1"], &[]))), 2);
    assert_eq!(code(&bpn(&trees_args("3", &["1,2,3", "2,1,3"], &[]))), 2);
    assert_eq!(code(&bpn(&trees_args("3", &["1,2,3", "-1,-2,3", "2,1,3", "1,2"], &[]))), 2);
    assert_eq!(code(&bpn(&trees_args("3", &["1,2,3", "-1,-2,3", "2,1,3", "4,1,2"], &[]))), 2);
    assert_eq!(code(&bpn(&["trees", "3"])), 2);
}

#[test]
fn trees_three_terminals_and_larger_n() {
    let o = bpn(&trees_args("3", &S3[..3], &[]));
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trees"].as_array().unwrap().len(), 2);
    let o = bpn(&trees_args("5", &["1,2,3,4,5", "-5,4,3,-2,1", "2,1,-3,4,5", "3,-1,2,5,-4"], &[]));
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trees"].as_array().unwrap().len(), 4);
}

#[test]
fn dot_has_a_subgraph_per_tree() {
    let o = bpn(&trees_args("4", &["1,2,3,4", "-1,-2,3,4", "2,1,3,4", "-4,-3,-2,-1"], &["--format", "dot"]));
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert!(dot.starts_with("graph family {"));
    assert_eq!(dot.matches("subgraph cluster_t").count(), 3);
    assert_eq!(dot.matches("doublecircle").count(), 4);
    assert!(dot.contains("\"-4,-3,-2,-1\""));
}

#[test]
fn verify_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_family(dir.path());
    let o = bpn(&["verify", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    // move one edge endpoint to a vertex that is not adjacent
    let g = Graph::build(3).unwrap();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let e = v["trees"][0]["edges"][0].clone();
    let a: Vec<i32> = serde_json::from_value(e[0].clone()).unwrap();
    let ga = g.id(&SignedPerm::new(a).unwrap()).unwrap();
    let far = g.vertices().find(|&w| w != ga && !g.adjacent(ga, w)).unwrap();
    v["trees"][0]["edges"][0][1] = serde_json::json!(g.perm(far).symbols());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = bpn(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("edge-not-in-graph"), "{}", stderr(&o));

    // drop a tree
    v = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    v["trees"].as_array_mut().unwrap().pop();
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&bpn(&["verify", bad.to_str().unwrap()])), 1);
}

#[test]
fn verify_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(code(&bpn(&["verify", empty.to_str().unwrap()])), 2);
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"n\": 3, \"trees\": 5}").unwrap();
    assert_eq!(code(&bpn(&["verify", junk.to_str().unwrap()])), 2);
    // a vertex of the wrong length
    let p = write_family(dir.path());
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    v["trees"][1]["vertices"][0] = serde_json::json!([1, 2]);
    std::fs::write(&junk, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&bpn(&["verify", junk.to_str().unwrap()])), 2);
    assert_eq!(code(&bpn(&["verify", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn ceiling_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_bpn"))
        .args(trees_args("4", &["1,2,3,4", "-1,-2,3,4", "2,1,3,4", "-4,-3,-2,-1"], &[]))
        .env("BPN_MAX_N", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert_eq!(code(&bpn(&["props", "9"])), 2);
}

#[test]
fn oracle_results() {
    let o = bpn(&["oracle", "2", "--s", "1,2", "-1,2", "2,1", "-2,-1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["max_idsts_found"], 1);
    assert_eq!(v["exhausted"], true);

    let mut a = vec!["oracle", "3", "--s"];
    a.extend_from_slice(&S3);
    let v: Value = serde_json::from_str(&stdout(&bpn(&a))).unwrap();
    assert_eq!(v["max_idsts_found"], 2);
    assert_eq!(v["exhausted"], true);
    assert_eq!(v["certificate"]["trees"].as_array().unwrap().len(), 2);

    a.extend_from_slice(&["--budget", "0"]);
    let o = bpn(&a);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exhausted"], false);
    assert_eq!(code(&bpn(&["oracle", "3", "--s", "1,2,3", "1,2,3"])), 2);
}

#[test]
fn sweep_is_deterministic() {
    let base = ["sweep", "3", "--k", "4", "--mode", "sample", "--count", "300", "--seed", "42"];
    let one = bpn(&[&base[..], &["--jobs", "1"]].concat());
    let two = bpn(&[&base[..], &["--jobs", "3"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(one.stdout, bpn(&[&base[..], &["--jobs", "1"]].concat()).stdout);
    let v: Value = serde_json::from_str(&stdout(&one)).unwrap();
    assert_eq!(v["verified"], 300);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["repair_rate"], 0.0);
    let hist: u64 = v["case_histogram"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(hist, 300);
    assert!(stderr(&one).contains("wall time"));
}

#[test]
fn sweep_modes_and_limits() {
    let o = bpn(&["sweep", "2", "--mode", "exhaustive"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["subsets"], 70);
    let o = bpn(&["sweep", "--n", "3", "--k", "3", "--count", "200", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verified"], 200);
    assert_eq!(code(&bpn(&["sweep", "4", "--mode", "exhaustive"])), 2);
    assert_eq!(code(&bpn(&["sweep", "3", "--k", "5"])), 2);
    assert_eq!(code(&bpn(&["sweep", "3", "--jobs", "0"])), 2);
}

#[test]
fn export_graph_and_clusters() {
    let o = bpn(&["export", "3"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 48);
    assert_eq!(v["edges"].as_array().unwrap().len(), 72);
    assert!(v.get("ids").is_none());
    let o = bpn(&["export", "3", "--cluster", "3", "--cluster", "-3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ids"].as_array().unwrap().len(), 16);
    assert_eq!(v["edges"].as_array().unwrap().len(), 16);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.dot");
    assert_eq!(code(&bpn(&["export", "2", "--format", "dot", "--out", p.to_str().unwrap()])), 0);
    let dot = std::fs::read_to_string(p).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 8);
    assert!(dot.contains("label=\"-2,-1\""));
    assert_eq!(code(&bpn(&["export", "3", "--cluster", "4"])), 2);
}
