use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(cmd: &str, scen: &Path, out: &Path, extra: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_qlevy"))
        .arg(cmd)
        .arg("--scenario")
        .arg(scen)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn report(out: &Path, cmd: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join(format!("{}.json", cmd))).unwrap()).unwrap()
}

#[test]
fn check_relations_irrep() {
    let d = tempfile::tempdir().unwrap();
    let (code, _) = run("check-relations", &scenario("irrep64.toml"), d.path(), &[]);
    assert_eq!(code, 0);
    let r = report(d.path(), "check-relations");
    assert!(r["max_interior_residual"].as_f64().unwrap() <= 1e-12);
    assert!(r["symbolic"]["failing"].as_array().unwrap().is_empty());
    assert!(d.path().join("check-relations.csv").exists());
}

#[test]
fn gauss_roundtrip() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run("gauss", &scenario("gauss3.toml"), d.path(), &[]).0, 0);
    let r = report(d.path(), "gauss");
    assert!(r["roundtrip_error"].as_f64().unwrap() <= 1e-12);
    assert_eq!(r["no_gc_witness"]["hermitian"], Value::Bool(false));
    let csv = std::fs::read_to_string(d.path().join("gauss.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + r["generating"]["battery_size"].as_u64().unwrap() as usize);
}

#[test]
fn counterexample_verdict() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run("counterexample", &scenario("counter.toml"), d.path(), &["--dim", "24"]).0, 0);
    let r = report(d.path(), "counterexample");
    assert_eq!(r["verdict"], "divergent");
    assert_eq!(r["dim"], 576);
}

#[test]
fn decompose_and_uq_hunt() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run("decompose", &scenario("three_levels.toml"), d.path(), &[]).0, 0);
    let r = report(d.path(), "decompose");
    assert_eq!(r["dims"], serde_json::json!({"1": 1, "2": 9, "3": 36}));
    assert_eq!(run("hunt", &scenario("uq2.toml"), d.path(), &[]).0, 0);
    let r = report(d.path(), "hunt");
    assert_eq!(r["generating"]["ok"], Value::Bool(true));
    assert_eq!(r["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for cmd in ["hunt", "semigroup"] {
        let s = if cmd == "hunt" { "hunt3.toml" } else { "semigroup2.toml" };
        assert_eq!(run(cmd, &scenario(s), a.path(), &["--seed", "5"]).0, 0);
        assert_eq!(run(cmd, &scenario(s), b.path(), &["--seed", "5"]).0, 0);
        for ext in ["json", "csv"] {
            let f = format!("{}.{}", cmd, ext);
            assert_eq!(std::fs::read(a.path().join(&f)).unwrap(), std::fs::read(b.path().join(&f)).unwrap(), "{}", f);
        }
    }
}

#[test]
fn structured_errors() {
    let d = tempfile::tempdir().unwrap();
    let bad = d.path().join("bad.toml");
    std::fs::write(&bad, "N = 3\nq = \"3/2\"\n").unwrap();
    let (code, stdout) = run("gauss", &bad, d.path(), &[]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["error"]["exit_code"], 2);
    assert!(d.path().join("error.json").exists());
    std::fs::write(&bad, "N = 3\n[gauss]\nr = [0, 0]\nR = [[1, 2], [2, 1]]\n").unwrap();
    assert_eq!(run("gauss", &bad, d.path(), &[]).0, 2);
    let (code, _) = run("decompose", &scenario("gauss3.toml"), d.path(), &[]);
    assert_eq!(code, 2);
}

#[test]
fn published_schema_is_current() {
    let o = Command::new(env!("CARGO_BIN_EXE_qlevy")).arg("schema").output().unwrap();
    let live: Value = serde_json::from_slice(&o.stdout).unwrap();
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenario.schema.json");
    let published: Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    assert_eq!(live, published);
}
