//! Exit codes, output files and manifest reruns of the command-line driver.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graph-influence"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).env_remove("GRAPH_INFLUENCE_OUT_DIR").args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn fixtures(dir: &Path) {
    let mut feats = String::from("x,y\n");
    let mut labels = String::from("label\n");
    for i in 0..30 {
        let c = i % 2;
        let _ = std::fmt::Write::write_fmt(
            &mut feats,
            format_args!("{},{}\n", c as f64 * 5.0 + (i as f64 * 0.37).sin(), (i as f64 * 0.91).cos()),
        );
        labels.push_str(&format!("{c}\n"));
    }
    fs::write(dir.join("x.csv"), feats).unwrap();
    fs::write(dir.join("y.csv"), labels).unwrap();
    fs::write(dir.join("g.edges"), "#nodes 4\n0 1 1\n1 2 1\n2 3 0.5\n").unwrap();
    fs::write(dir.join("f.csv"), "value\n0\n0\n1\n4\n").unwrap();
}

#[test]
fn influence_writes_scores_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let o = run(
        dir.path(),
        &["influence", "--graph", "g.edges", "--signal", "f.csv", "--operator", "transition", "--out", "scores.csv"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let scores = fs::read_to_string(dir.path().join("scores.csv")).unwrap();
    assert!(scores.starts_with("node_id,score,rank\n"));
    // f − D⁻¹W f on the path with weights 1, 1, 0.5: node 3 sees only node 2
    assert!(scores.contains("\n3,9,1\n"), "{scores}");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("scores.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["task"], "influence");
    assert_eq!(manifest["params"]["operator"], "transition");
}

#[test]
fn manifest_rerun_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let o = run(
        dir.path(),
        &["noisy-labels", "--features", "x.csv", "--labels", "y.csv", "--k", "4", "--out", "a.csv"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(dir.path(), &["noisy-labels", "--manifest", "a.manifest.json", "--out", "b.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read(dir.path().join("a.csv")).unwrap(), fs::read(dir.path().join("b.csv")).unwrap());
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let o = bin()
        .current_dir(dir.path())
        .env("GRAPH_INFLUENCE_OUT_DIR", "results")
        .args(["build-graph", "--features", "x.csv", "--k", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("results/graph.edges").exists());
    assert!(dir.path().join("results/graph.manifest.json").exists());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    for args in [
        vec!["no-such-command"],
        vec!["influence", "--bogus"],
        vec!["corrupt-labels", "--labels", "y.csv", "--beta", "0.1"],
        vec!["sample", "--graph", "g.edges", "--embedding", "f.csv", "--budget", "2", "--strategy", "random"],
        vec!["influence", "--signal", "f.csv"],
        vec!["influence", "--operator", "diagonal", "--graph", "g.edges", "--signal", "f.csv"],
    ] {
        let o = run(dir.path(), &args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn data_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    fs::write(dir.path().join("bad.csv"), "1,2\n3,NaN\n").unwrap();
    fs::write(dir.path().join("short.csv"), "0\n1\n").unwrap();
    for args in [
        vec!["build-graph", "--features", "missing.csv"],
        vec!["build-graph", "--features", "bad.csv", "--k", "1"],
        vec!["noisy-labels", "--features", "x.csv", "--labels", "short.csv"],
        vec!["influence", "--graph", "g.edges", "--signal", "short.csv"],
    ] {
        let o = run(dir.path(), &args);
        assert_eq!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}
