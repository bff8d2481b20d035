//! End-to-end runs of the `cvxgraph` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cvxgraph::graph::{conjugate, cycle, parse_graph, serialize_graph, Graph, RngStream};
use cvxgraph::linalg::{majorization_violation, spectrum};
use cvxgraph::{Permutation, SymMatrix};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvxgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn value(args: &[&str]) -> f64 {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out).trim().parse().unwrap()
}

fn read_graph(path: &Path) -> SymMatrix {
    parse_graph(&fs::read_to_string(path).unwrap())
        .unwrap()
        .adjacency
}

#[test]
fn invariant_values() {
    let fiedler = value(&["invariant", "--graph", "cycle:16", "--name", "fiedler"]);
    assert!((fiedler - 0.152240934977).abs() < 1e-12);
    assert_eq!(
        value(&["invariant", "--graph", "clique:3", "--name", "maxcut"]),
        2.0
    );
    let k4 = ["--name", "theta", "--pattern", "clique:4"];
    let rook = value(&[&["invariant", "--graph", "rook:4"][..], &k4].concat());
    let shrikhande = value(&[&["invariant", "--graph", "shrikhande"][..], &k4].concat());
    assert_eq!(rook, 12.0);
    assert!(shrikhande < 12.0);
    let out = run(&["invariant", "--graph", "path:3", "--name", "degseq"]);
    assert_eq!(stdout(&out).trim(), "2 1 1");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "2\n0 1\n1 x\n").unwrap();
    let bad = format!("file:{}", bad.display());
    assert_eq!(
        code(&["invariant", "--graph", "nope", "--name", "edges"]),
        2
    );
    assert_eq!(code(&["invariant", "--graph", &bad, "--name", "edges"]), 2);
    assert_eq!(
        code(&["invariant", "--graph", "cycle:4", "--name", "nope"]),
        2
    );
    assert_eq!(code(&["generate", "--constraints", "preset:nope"]), 2);
    assert_eq!(
        code(&["invariant", "--graph", "cycle:40", "--name", "maxcut"]),
        3
    );
    let sdp = ["invariant", "--graph", "cycle:5", "--name", "maxcut-sdp"];
    assert_eq!(code(&[&sdp[..], &["--max-iter", "2"]].concat()), 4);
    assert_eq!(code(&sdp), 0);
}

#[test]
fn deconvolution_csv_is_reproducible() {
    let args = [
        "deconvolve",
        "--g1",
        "cycle:16",
        "--g2",
        "clebsch",
        "--trials",
        "2",
        "--seed",
        "5",
        "--jobs",
        "1",
        "--no-timing",
    ];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial,seed,success,recovery_error_inf,iterations,elapsed_ms"
    );
    assert_eq!(lines.filter(|l| l.ends_with(",0")).count(), 2);
}

#[test]
fn singleton_family_generates_one_graph() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("ones.json");
    fs::write(
        &config,
        r#"{"n": 4, "constraints": [{"type": "box", "lo": 1, "hi": 1}]}"#,
    )
    .unwrap();
    let graphs = dir.path().join("graphs");
    let out = run(&[
        "generate",
        "--constraints",
        config.to_str().unwrap(),
        "--trials",
        "3",
        "--emit-graph",
        graphs.to_str().unwrap(),
        "--out",
        dir.path().join("gen.csv").to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut files: Vec<_> = fs::read_dir(&graphs)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert_eq!(files.len(), 3);
    for f in &files {
        assert_eq!(read_graph(f), SymMatrix::ones(4));
    }
    let csv = fs::read_to_string(dir.path().join("gen.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn generated_graphs_stay_in_the_spectral_hull() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("hull.json");
    fs::write(
        &config,
        r#"{"n": 8, "constraints": [{"type": "box"}, {"type": "spectral_hull", "graph": "cycle:8"}]}"#,
    )
    .unwrap();
    let graphs = dir.path().join("graphs");
    let out = run(&[
        "generate",
        "--constraints",
        config.to_str().unwrap(),
        "--trials",
        "2",
        "--seed",
        "3",
        "--emit-graph",
        graphs.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let bound = spectrum(&cycle(8)).unwrap();
    for entry in fs::read_dir(&graphs).unwrap() {
        let g = read_graph(&entry.unwrap().path());
        assert!(majorization_violation(&bound, &spectrum(&g).unwrap()) <= 1e-6);
        assert!(g
            .as_slice()
            .iter()
            .all(|&v| (-1e-6..=1.0 + 1e-6).contains(&v)));
    }
}

#[test]
fn hypotest_picks_the_family_of_a_member() {
    let dir = tempfile::tempdir().unwrap();
    let sample = conjugate(
        &cycle(16),
        &Permutation::random(&mut RngStream::new(11), 16),
    )
    .unwrap();
    let path = dir.path().join("sample.txt");
    fs::write(&path, serialize_graph(&Graph::new(sample))).unwrap();
    let out = run(&[
        "hypotest",
        "--graph",
        &format!("file:{}", path.display()),
        "--constraints",
        "preset:cycle-family-16",
        "preset:connected-family-16",
        "--emit-graph",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).lines().any(|l| l == "winner 1"));
    assert!(dir.path().join("m1.txt").exists() && dir.path().join("m2.txt").exists());
}
