use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corfun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corfun")).args(args).env_remove("CORFUN_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", stderr(o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

/// Parses `x,formula,bruteforce,basis_count` rows.
fn csv_rows(s: &str) -> Vec<Vec<String>> {
    s.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn lattice_info_lozenge() {
    let v = json(&corfun(&["lattice", "info", "--name", "lozenge"]));
    assert_eq!(v["irr"], 2);
    assert_eq!(v["distributive"], true);
    assert_eq!(v["G"], 4);
    assert_eq!(v["size"], 4);
    let v = json(&corfun(&["lattice", "info", "--name", "p32"]));
    assert_eq!(v["Gamma"], serde_json::json!(["(1,1)"]));
    assert_eq!(v["G"], 5);
}

#[test]
fn functor_rank_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "antichain2.json", r#"{"elements": ["a", "b"], "relation": []}"#);
    let o = corfun(&["functor", "rank", "--poset", p.to_str().unwrap(), "--x", "0..4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("x,formula,bruteforce,basis_count\n"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    for (x, r) in rows.iter().enumerate() {
        let want = 4i64.pow(x as u32) - 2 * 3i64.pow(x as u32) + 2i64.pow(x as u32);
        assert_eq!(r[0], x.to_string());
        assert_eq!(r[1], want.to_string());
        assert_eq!(r[2], r[1]);
        assert_eq!(r[3], r[1]);
    }
    let o = corfun(&["functor", "rank", "--poset", p.to_str().unwrap(), "--x", "5", "--formula-only"]);
    assert_eq!(csv_rows(&stdout(&o)), vec![vec!["5", "570", "", "570"]]);
    let o = corfun(&["functor", "rank", "--name", "chain2", "--x", "3", "--formula-only"]);
    assert_eq!(csv_rows(&stdout(&o)), vec![vec!["3", "12", "", "12"]]);
}

#[test]
fn examples_regression_passes() {
    let o = corfun(&["verify", "examples19", "--x-max", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 5 * 6);
    assert!(rows.iter().all(|r| r.last().unwrap() == "true"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Usage errors.
    for args in [&["frobnicate"][..], &["lattice", "info"], &["lattice", "info", "--name", "m3", "--bogus"], &["functor", "rank", "--name", "m3", "--x", "5..2"]] {
        let o = corfun(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(stderr(&o).starts_with("corfun: usage: "));
        assert_eq!(stderr(&o).lines().count(), 1);
    }
    // Validation: not a lattice, malformed JSON, unknown keys, unknown names.
    let v = write(&dir, "v.json", r#"{"elements": ["c","a","b"], "relation": [["c","a"],["c","b"]]}"#);
    let o = corfun(&["lattice", "build", "--lattice", v.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a lattice"));
    let bad = write(&dir, "bad.json", r#"{"elements": ["a"], "relation": [], "extra": 1}"#);
    assert_eq!(corfun(&["poset", "ideals", "--poset", bad.to_str().unwrap()]).status.code(), Some(2));
    let cyc = write(&dir, "cyc.json", r#"{"elements": ["a","b"], "relation": [["a","b"],["b","a"]]}"#);
    assert_eq!(corfun(&["poset", "ideals", "--poset", cyc.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(corfun(&["lattice", "info", "--name", "nope"]).status.code(), Some(2));
    assert_eq!(corfun(&["functor", "gamma-span", "--name", "m3", "--x", "1"]).status.code(), Some(2));
    // Budget.
    let o = corfun(&["functor", "rank", "--name", "lozenge", "--x", "9"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("corfun: budget: "));
    let o = Command::new(env!("CARGO_BIN_EXE_corfun"))
        .args(["functor", "basis", "--name", "lozenge", "--x", "3"])
        .env("CORFUN_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_corfun"))
        .args(["functor", "basis", "--name", "lozenge", "--x", "1"])
        .env("CORFUN_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(corfun(&["endo", "total", "--n", "5"]).status.code(), Some(3));
}

#[test]
fn lattice_json_with_validation() {
    let dir = tempfile::tempdir().unwrap();
    let m3 = write(
        &dir,
        "m3.json",
        r#"{"elements": ["0","a","b","c","1"],
            "relation": [["0","a"],["0","b"],["0","c"],["a","1"],["b","1"],["c","1"],["0","1"]],
            "validate": true}"#,
    );
    let v = json(&corfun(&["lattice", "info", "--lattice", m3.to_str().unwrap()]));
    assert_eq!(v["irr"], 3);
    assert_eq!(v["distributive"], false);
    assert_eq!(v["name"], "m3");
}

#[test]
fn closure_and_quotients() {
    let v = json(&corfun(&["lattice", "closure", "--name", "v", "--mode", "L"]));
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);
    let fibres = v["fibres"].as_array().unwrap();
    let total: usize = fibres.iter().map(|f| f["ideals"].as_array().unwrap().len()).sum();
    assert_eq!(total, 5, "fibres partition I↓(V)");
    let k = json(&corfun(&["lattice", "closure", "--name", "v", "--mode", "K"]));
    assert_eq!(k["elements"].as_array().unwrap().len(), 5);
    let chain = json(&corfun(&["lattice", "closure", "--name", "chain3", "--mode", "L"]));
    assert_eq!(chain["elements"].as_array().unwrap().len(), 3);
    let eq = json(&corfun(&["lattice", "closure", "--name", "equality3", "--mode", "L"]));
    assert_eq!(eq["elements"].as_array().unwrap().len(), 5);

    let q = json(&corfun(&["lattice", "quotients", "--name", "n5"]));
    assert_eq!(q["pi"]["surjective"], true);
    assert_eq!(q["phi"]["joins"], true);
    assert_eq!(q["psi"]["surjective"], true);
    let dot = stdout(&corfun(&["lattice", "closure", "--name", "v", "--mode", "K", "--format", "dot"]));
    assert!(dot.starts_with("digraph"));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["lattice", "dot", "--name", "p32"][..],
        &["forest", "build", "--random", "8"],
        &["forest", "idempotents", "--random", "6"],
        &["verify", "invariants", "--cases", "200"],
        &["functor", "rank", "--name", "n5", "--x", "0..3"],
    ] {
        let a = corfun(args);
        let b = corfun(args);
        assert!(a.status.success(), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let dot = stdout(&corfun(&["lattice", "dot", "--name", "p32"]));
    assert_eq!(dot.matches("style=solid").count(), 3);
    assert_eq!(dot.matches("arrowhead=none").count(), 7);
}

#[test]
fn poset_commands() {
    let v = json(&corfun(&["poset", "ideals", "--name", "v"]));
    assert_eq!(v["count"], 5);
    let a = json(&corfun(&["poset", "auts", "--name", "antichain3"]));
    assert_eq!(a["order"], 6);
    let mu = stdout(&corfun(&["poset", "mobius", "--name", "chain3"]));
    // μ on a chain: 1 on the diagonal, −1 on covers, 0 elsewhere.
    let rows = csv_rows(&mu);
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.iter().filter(|r| r[2] == "-1").count(), 2);
    assert_eq!(rows.iter().filter(|r| r[2] == "0").count(), 1);
}

#[test]
fn functor_commands() {
    let s = json(&corfun(&["functor", "smith", "--name", "lozenge", "--x", "2"]));
    assert_eq!(s["divisors"], serde_json::json!([1, 1]));
    assert_eq!(s["zeros"], 14);
    let b = json(&corfun(&["functor", "basis", "--name", "p32", "--x", "3"]));
    assert_eq!(b["count"], 6);

    let dir = tempfile::tempdir().unwrap();
    let id = write(&dir, "id.json", r#"{"source": ["x","y"], "target": ["x","y"], "pairs": [["x","x"],["y","y"]]}"#);
    let a = json(&corfun(&["functor", "action", "--name", "lozenge", "--corr", id.to_str().unwrap()]));
    assert_eq!(a["matrix"], serde_json::json!([[1, 0], [0, 1]]));
    let swap = write(&dir, "swap.json", r#"{"source": ["x","y"], "target": ["x","y"], "pairs": [["x","y"],["y","x"]]}"#);
    let a = json(&corfun(&["functor", "action", "--name", "lozenge", "--corr", swap.to_str().unwrap()]));
    assert_eq!(a["matrix"], serde_json::json!([[0, 1], [1, 0]]));
    let dangling = write(&dir, "d.json", r#"{"source": ["x"], "target": ["y"], "pairs": [["x","y"]]}"#);
    assert_eq!(corfun(&["functor", "action", "--name", "lozenge", "--corr", dangling.to_str().unwrap()]).status.code(), Some(2));

    let o = corfun(&["functor", "gamma-span", "--name", "v", "--x", "0..3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(csv_rows(&stdout(&o)).iter().all(|r| r[1] == r[2]));
}

#[test]
fn remaining_commands() {
    let e = json(&corfun(&["endo", "total", "--n", "3"]));
    assert_eq!(e["join_endomaps"], 20);
    assert_eq!(e["failures"], serde_json::json!([]));
    let m = json(&corfun(&["module", "check", "--name", "chain2"]));
    assert_eq!(m["mismatches"], 0);
    assert_eq!(m["relations"], 16);
    let f = json(&corfun(&["forest", "idempotents", "--name", "p32"]));
    assert_eq!(f["idempotent"], true);
    let g = json(&corfun(&["forest", "build", "--name", "p32", "--format", "json"]));
    assert_eq!(g["leaves"], serde_json::json!(["(1,1)"]));
    let o = corfun(&["verify", "invariants", "--cases", "100"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with("ok")));
    assert_eq!(corfun(&["--help"]).status.code(), Some(0));
}
