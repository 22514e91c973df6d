use std::path::Path;
use std::process::{Command, Output};

use unital_ramsey::graph::Graph;
use unital_ramsey::secant_graph::SecantGraph;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unital-ramsey"))
        .args(args)
        .current_dir(dir)
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .unwrap()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--out", "o", "build", "--q", "3", "--onan"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let o = dir.path().join("o");
    for f in ["unital.txt", "cliques.txt", "graph.edges", "report.json"] {
        assert!(o.join(f).exists(), "missing {f}");
    }
    let r = read_json(&o.join("report.json"));
    assert_eq!(r["counts"]["points"], 28);
    assert_eq!(r["counts"]["secants"], 63);
    assert_eq!(r["counts"]["n"], 63);
    assert_eq!(r["counts"]["d"], 32);
    assert_eq!(r["counts"]["cliques"], 28);
    assert_eq!(r["onan"]["found"], 0);
    assert_eq!(r["passed"], true);
}

#[test]
fn exports_round_trip_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["--out", "o", "build", "--q", "3"]).status.success());
    let o = dir.path().join("o");
    let edges = std::fs::read_to_string(o.join("graph.edges")).unwrap();
    let g = Graph::parse_edge_list(&edges).unwrap();
    assert_eq!(g.to_edge_list(), edges);

    let cliques = std::fs::read_to_string(o.join("cliques.txt")).unwrap();
    let parsed = SecantGraph::parse_cliques(&cliques).unwrap();
    let rebuilt = SecantGraph::from_parts_unchecked(3, g, parsed);
    assert_eq!(rebuilt.cliques_dump(), cliques);
}

#[test]
fn randomize_sidecar_matches_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--out", "o", "randomize", "--q", "3", "--seed", "0x2a", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let o = dir.path().join("o");
    let g = Graph::parse_edge_list(&std::fs::read_to_string(o.join("hstar.edges")).unwrap()).unwrap();
    let side = read_json(&o.join("hstar.json"));
    assert_eq!(side["seed"], 42);
    assert_eq!(side["edge_digest"], g.edge_digest());
    assert_eq!(g.to_dense().count_k4s(), 0);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["build"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["build", "--q", "6"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["randomize", "--q", "3", "--seed", "nope"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["verify", "missing.json", "missing.edges"]).status.code(), Some(2));
}

#[test]
fn tampered_witness_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--out", "w", "witness", "--q", "3", "--seed", "7", "--p", "0.4", "--t", "40"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(run(dir.path(), &["verify", "w/certificate.json", "w/witness.edges"]).status.code(), Some(0));

    let path = dir.path().join("w/witness.edges");
    let g = Graph::parse_edge_list(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let edges: Vec<(u32, u32)> = g.edges().skip(1).collect();
    std::fs::write(&path, Graph::from_edges(g.n(), &edges).unwrap().to_edge_list()).unwrap();
    let out = run(dir.path(), &["verify", "w/certificate.json", "w/witness.edges"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edge digest"));
}
