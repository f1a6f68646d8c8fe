use p1dyn::cli::{run, SCHEMA_VERSION};
use p1dyn::moduli2::CENSUS_COLUMNS;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String) {
    run(std::iter::once("p1dyn").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let (code, out) = call(args);
    assert_eq!(code, 0, "{args:?}: {out}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn construct_reports_the_claim() {
    let v = json(&["construct", "power-map", "--q", "3", "--a", "1"]);
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["command"], "construct");
    assert_eq!(v["holds"], true);
    assert_eq!(v["order"], 24);
    let v = json(&["construct", "dihedral", "--p", "5", "--n", "2", "--branch", "cubic"]);
    assert_eq!(v["order"], 4);
    let v = json(&["construct", "platonic", "--p", "7", "--group", "s4"]);
    assert_eq!(v["order"], 24);
    let v = json(&["construct", "cyclic", "--p", "7", "--n", "4", "--oracle-bound", "49"]);
    assert_eq!(v["holds"], true);
}

#[test]
fn aut_and_conj() {
    let v = json(&["aut", "--map", "z^3", "--q", "3"]);
    assert_eq!(v["aut"]["order"], 24);
    let v = json(&["aut", "--map", "1/z^2", "--p", "7", "--oracle-bound", "49"]);
    assert_eq!(v["aut"]["order"], 6);
    let v = json(&["conj", "--map", "z^3", "--to", "1/z^3", "--q", "9"]);
    assert_eq!(v["command"], "conj");
    assert_eq!(v["conjugators"].as_array().unwrap().len(), 24);
}

#[test]
fn locus_from_point_and_map() {
    let v = json(&["locus", "--p", "7", "--sigma1", "1", "--sigma2", "5"]);
    assert_eq!(v["verdict"]["special"], "cusp");
    assert_eq!(v["verdict"]["predicted_order"], 6);
    let v = json(&["locus", "--p", "7", "--sigma1", "-6", "--sigma2", "12"]);
    assert_eq!(v["verdict"]["special"], "cusp");
    let v = json(&["locus", "--p", "7", "--map", "z + 1/z"]);
    assert_eq!(v["point"]["sigma1"], "3");
    assert_eq!(v["verdict"]["special"], "triple-one");
}

#[test]
fn invariants_and_dm() {
    let v = json(&["invariants", "--q", "3", "--degree", "4"]);
    assert_eq!(v["command"], "invariants");
    let v = json(&["dm", "--f", "u2", "--g", "u1^2", "--q", "3"]);
    assert_eq!(v["command"], "dm");
    assert_eq!(v["map"]["degree"], 7);
}

#[test]
fn census_csv_and_json() {
    let (code, out) = call(&["census", "--q", "3"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), CENSUS_COLUMNS.join(","));
    assert_eq!(lines.count(), 9);
    let v = json(&["census", "--q", "2", "--format", "json"]);
    assert_eq!(v["maps"], 24);
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &["construct", "psl2", "--q", "3"][..],
        &["census", "--q", "4"][..],
        &["aut", "--map", "z^4 + z", "--q", "4"][..],
    ] {
        assert_eq!(call(args), call(args));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["aut", "--map", "z^^2", "--p", "7"]).0, 2);
    assert_eq!(call(&["aut", "--map", "z^2", "--p", "6"]).0, 2);
    assert_eq!(call(&["bogus"]).0, 2);
    assert_eq!(call(&["construct", "platonic", "--p", "5", "--group", "a5"]).0, 2);
    assert_eq!(call(&["aut", "--map", "z^2", "--q", "5", "--format", "csv"]).0, 2);
    let (code, out) = call(&["construct", "cyclic", "--p", "3", "--n", "3"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "error");
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("p1dyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.csv");
    let p = path.to_str().unwrap();
    let (code, out) = call(&["census", "--q", "2", "--out", p]);
    assert_eq!((code, out.as_str()), (0, ""));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("sigma1,sigma2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

/// The suite carries one known-unattainable criterion, so the binary exits 1.
#[test]
fn selftest_exit_code_reflects_failures() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_p1dyn"))
        .arg("selftest")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 11);
    let failed = results.iter().filter(|r| r["passed"] == false).count();
    assert_eq!(out.status.code(), Some(if failed == 0 { 0 } else { 1 }));
    for r in results.iter().filter(|r| r["passed"] == false) {
        assert_eq!(r["known_unattainable"], true, "{r}");
    }
}
