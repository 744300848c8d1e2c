use std::path::Path;
use std::process::{Command, Output};

fn reductor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reductor")).args(args).output().expect("binary runs")
}

fn export(name: &str, dir: &Path) -> String {
    let out = reductor(&["example", name, "--export"]);
    assert!(out.status.success());
    let path = dir.join(format!("{name}.toml"));
    std::fs::write(&path, &out.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn quantum_plane_run_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("qp.toml");
    std::fs::write(
        &cfg,
        r#"
[field]
base = "Q"
[valuation]
kind = "p-adic"
p = 3
[constants]
q = "2"
[algebra]
generators = ["Y", "X"]
relations = ["X*Y = q*Y*X"]
mode = "graded"
[checks]
run = ["unramified", "valuation_axioms"]
"#,
    )
    .unwrap();
    let out = reductor(&["run", cfg.to_str().unwrap(), "--max-degree", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[pass ] unramified") && text.contains("[pass ] valuation_axioms"));
}

#[test]
fn bad_q_plane_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = export("bad_q_plane", dir.path());
    let out = reductor(&["run", &cfg, "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["build"]["error"]["kind"], "coefficient-escape");
    assert_eq!(v["build"]["error"]["word"], "X*Y");
    assert_eq!(v["passed"], false);
}

#[test]
fn empty_checks_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = export("weyl_a1", dir.path());
    let src = std::fs::read_to_string(&cfg).unwrap();
    let start = src.find("run = [").unwrap();
    let end = start + src[start..].find(']').unwrap();
    std::fs::write(&cfg, format!("{}run = []{}", &src[..start], &src[end + 1..])).unwrap();
    let out = reductor(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("checks.run") && err.contains("line "), "{err}");
}

#[test]
fn explain_known_and_unknown() {
    let out = reductor(&["explain", "crossed"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("twisted group ring"));
    let out = reductor(&["explain", "strong"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("Γ-separated and strong"));
    let out = reductor(&["explain", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown check"));
}

#[test]
fn examples_list_and_run() {
    let out = reductor(&["list-examples"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    let out = reductor(&["example", "bad_q_plane"]);
    assert_eq!(out.status.code(), Some(0), "expected failure matches the catalog");
    let out = reductor(&["example", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_reports_are_deterministic_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = export("quantum_weyl", dir.path());
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = reductor(&["run", &cfg, "--max-degree", "3", "--seed", "5", "--format", "json", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let strip = |p: &Path| {
        let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let (va, vb) = (strip(&a), strip(&b));
    assert_eq!(va, vb);
    assert_eq!(va["seed"], 5);
    assert_eq!(va["max_degree"], 3);
    assert_eq!(va["schema_version"], 1);
}
