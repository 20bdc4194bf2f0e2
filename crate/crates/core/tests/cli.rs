use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn write_graph(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hamkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn hamkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamkit"))
        .args(args)
        .env_remove("HAMKIT_SEED")
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 1);
    serde_json::from_str(&text).unwrap()
}

fn without_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn detect_hc_on_a_cycle() {
    let g = write_graph("cycle.txt", "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    let r = report(&hamkit(&["detect-hc", g.to_str().unwrap(), "--seed", "7"]));
    assert_eq!(r["answer"], "yes");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["command"], "detect-hc");
}

#[test]
fn count_branchings_on_a_path() {
    let g = write_graph("path.txt", "# a path\n4 3\n0 1\n1 2\n2 3\n");
    let r = report(&hamkit(&["count-branchings", g.to_str().unwrap(), "--root", "0"]));
    assert_eq!(r["count"], 1);
    let r = report(&hamkit(&["count-branchings", g.to_str().unwrap(), "--root", "2"]));
    assert_eq!(r["count"], 0);
}

#[test]
fn naive_and_mitm_residues_agree() {
    let g = write_graph("k5.txt", &hamkit::graph::Digraph::complete(5).to_edge_list());
    let g = g.to_str().unwrap();
    let base = ["count-mod", g, "--p", "3", "--k", "2", "--seed", "1", "--mode"];
    let naive = report(&hamkit(&[&base[..], &["naive"]].concat()));
    let mitm = report(&hamkit(&[&base[..], &["mitm"]].concat()));
    // 4! = 24 Hamiltonian cycles
    assert_eq!(naive["residue"], 24 % 9);
    assert_eq!(naive["residue"], mitm["residue"]);
    assert_eq!(mitm["modulus"], 9);
}

#[test]
fn same_seed_same_bytes() {
    let g = write_graph(
        "rand.txt",
        "6 11\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n0 3\n2 5\n4 1\n3 0\n1 4\n",
    );
    let g = g.to_str().unwrap();
    for args in [
        vec!["detect-hc", g, "--seed", "3"],
        vec!["detect-k-internal", g, "--k", "3", "--seed", "3"],
        vec!["detect-k-leaf", g, "--k", "2", "--seed", "3"],
        vec!["count-mod", g, "--p", "2", "--seed", "3"],
    ] {
        let a = without_elapsed(report(&hamkit(&args)));
        let b = without_elapsed(report(&hamkit(&args)));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let threaded = report(&hamkit(&[&args[..], &["--threads", "4"]].concat()));
        assert_eq!(a["answer"], threaded["answer"]);
        assert_eq!(a["diagnostics"], threaded["diagnostics"]);
    }
}

#[test]
fn seed_falls_back_to_environment() {
    let g = write_graph("env.txt", "3 3\n0 1\n1 2\n2 0\n");
    let out = Command::new(env!("CARGO_BIN_EXE_hamkit"))
        .args(["detect-hc", g.to_str().unwrap()])
        .env("HAMKIT_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(report(&out)["seed"], 99);
}

#[test]
fn exit_codes() {
    let bad = write_graph("bad.txt", "2 1\n0 0\n");
    let out = hamkit(&["detect-hc", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(hamkit(&["detect-hc", "/nonexistent/g.txt"]).status.code(), Some(2));
    assert_eq!(hamkit(&["detect-hc"]).status.code(), Some(2));
    let ok = write_graph("ok.txt", "2 2\n0 1\n1 0\n");
    assert_eq!(
        hamkit(&["detect-hc", ok.to_str().unwrap(), "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hamkit(&["count-mod", ok.to_str().unwrap(), "--p", "4"]).status.code(),
        Some(2)
    );

    let big = write_graph("big.txt", &hamkit::graph::Digraph::cycle(23).to_edge_list());
    let out = hamkit(&["oracle", "held-karp-hc", big.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn no_answers_exit_zero() {
    let g = write_graph("dag.txt", "4 3\n0 1\n1 2\n2 3\n");
    let r = report(&hamkit(&["detect-hc", g.to_str().unwrap()]));
    assert_eq!(r["answer"], "no");
    let r = report(&hamkit(&["detect-k-leaf", g.to_str().unwrap(), "--k", "2"]));
    assert_eq!(r["answer"], "no");
}

#[test]
fn duplicate_arcs_warn() {
    let g = write_graph("dup.txt", "3 4\n0 1\n0 1\n1 2\n2 0\n");
    let out = hamkit(&["oracle", "held-karp-hc", g.to_str().unwrap()]);
    assert_eq!(report(&out)["count"], 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));
}
