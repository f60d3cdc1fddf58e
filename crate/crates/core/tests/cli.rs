use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn ulogic(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ulogic"))
        .args(args)
        .env_remove("ULOGIC_SEED")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let (code, out, err) = ulogic(&all);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn excluded_middle_witness() {
    let (code, out, _) = ulogic(&["taut", "--algebra", "godel-unit", "--formula", "p \\/ ~p", "--strategy", "grid:0.25"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("COUNTEREXAMPLE"));
    assert!(out.contains("p = 0.5"));
}

#[test]
fn tautology_holds_and_proves() {
    let (code, v) = json(&["taut", "--algebra", "prob-ray", "--formula", "p -> p", "--strategy", "random:500:4"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("HOLDS_ON_SAMPLED")));
    let (code, v) = json(&["taut", "--algebra", "boolean2", "--formula", "p \\/ ~p", "--strategy", "exhaustive"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("PROVEN_EXHAUSTIVE")));
}

#[test]
fn witnesses_replay_through_eval() {
    let cases = [
        ("godel-unit", "p \\/ ~p", "grid:0.25", false),
        ("godel-unit", "p -> (p & p)", "grid:0.1", true),
        ("prob-ray", "(p & ~p) -> 0", "random:1000:2", false),
        ("heyting3", "p \\/ ~p", "exhaustive", false),
        ("product(godel-unit,prob-ray)", "p \\/ ~p", "grid:0.25", false),
    ];
    let dir = tempfile::tempdir().unwrap();
    for (i, (alg, f, strategy, search)) in cases.into_iter().enumerate() {
        let mut args = vec!["taut", "--algebra", alg, "--formula", f, "--strategy", strategy];
        if search {
            args.push("--search-and");
        }
        let (code, v) = json(&args);
        assert_eq!(code, 1, "{f} on {alg}");
        let path = dir.path().join(format!("w{i}.json"));
        std::fs::write(&path, serde_json::to_string(&v["witness"]).unwrap()).unwrap();
        let (code, e) = json(&["eval", "--algebra", alg, "--formula", f, "--assign", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{f}: {e}");
        assert_eq!(e["value"], v["value"], "{f} on {alg}");
        assert_eq!(e["at_least_one"], Value::Bool(false));
    }
}

#[test]
fn eval_exit_codes() {
    let table = data("data/detachment_table.json");
    let (code, out, _) = ulogic(&["eval", "--formula", "(p & (p -> q)) -> q", "--assign", &table]);
    assert_eq!((code, out.as_str()), (0, "p & (p -> q) -> q = 0.8\n"));
    assert_eq!(ulogic(&["eval", "--formula", "p & r", "--assign", &table]).0, 2);
    assert_eq!(ulogic(&["eval", "--algebra", "godel-unit", "--formula", "p", "--assign", &table]).0, 2);
    assert_eq!(ulogic(&["eval", "--formula", "p &", "--assign", &table]).0, 2);
    assert_eq!(ulogic(&["eval", "--formula", "p", "--assign", "/nonexistent.json"]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{ "algebra": "godel-unit", "atoms": { "p": 0.3, "q": 0.4 }, "policy": "table",
             "table": [ { "left": "p", "right": "q", "value": 0.9 } ] }"#,
    )
    .unwrap();
    let (code, out, _) = ulogic(&["eval", "--formula", "p & q", "--assign", bad.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("INVALID"));
}

#[test]
fn proof_check_exit_codes() {
    let (code, out, _) = ulogic(&["proof-check", "--script", &data("proofs/one_implication_elimination.upl")]);
    assert_eq!(code, 0);
    assert!(out.contains("ACCEPTED: (1 -> p) -> p"));

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("proofs/gfl_causality.upl")).unwrap();
    let broken = dir.path().join("broken.upl");
    std::fs::write(&broken, text.replace("MP(3,4)", "MP(4,3)")).unwrap();
    let (code, v) = json(&["proof-check", "--script", broken.to_str().unwrap()]);
    assert_eq!((code, v["accepted"].as_bool(), v["first_failure"].as_u64()), (1, Some(false), Some(5)));

    let garbage = dir.path().join("garbage.upl");
    std::fs::write(&garbage, "theory: GFL\n1. p ;; MP(3,4)\n").unwrap();
    assert_eq!(ulogic(&["proof-check", "--script", garbage.to_str().unwrap()]).0, 2);

    let (code, v) = json(&["proof-check", "--soundness", "--script", &data("proofs/gpl_excluded_middle_negation.upl")]);
    assert_eq!(code, 0);
    assert_eq!(v["soundness"].as_array().unwrap().len(), 2);
}

#[test]
fn probability_commands() {
    let coins = data("data/two_coins.json");
    assert_eq!(ulogic(&["prob-validate", "--space", &coins]).0, 0);
    let (code, v) = json(&["prob-validate", "--space", &data("data/not_additive.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["kolmogorov_ok"], Value::Bool(false));
    assert_eq!(v["alternative_ok"], Value::Bool(false));

    let (code, v) = json(&["prob-extend", "--space", &coins, "--formula", "First \\/ Second"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"].as_f64(), Some(0.75));
    assert_eq!(v["event"].as_str(), Some("hh,ht,th"));
    assert_eq!(ulogic(&["prob-extend", "--space", &data("data/not_additive.json")]).0, 1);

    let (code, v) = json(&["prob-restrict", "--space", &coins]);
    assert_eq!((code, &v["round_trip_exact"]), (0, &Value::Bool(true)));
    let skewed = data("data/skewed_beliefs.json");
    assert_eq!(ulogic(&["prob-restrict", "--space", &data("data/not_additive.json"), "--assign", &skewed]).0, 1);
    assert_eq!(ulogic(&["prob-validate", "--space", &data("data/detachment_table.json")]).0, 2);
}

#[test]
fn bounds_and_laws() {
    let (code, out, _) = ulogic(&["bounds", "--p-phi", "0.8", "--p-imp", "0.9", "--t-phi", "0.6", "--t-imp", "0.7"]);
    assert_eq!((code, out.as_str()), (0, "p:[0.72,0.9] t:[0.6,0.7]\n"));
    let (_, v) = json(&["bounds", "--p-phi", "0.8", "--p-imp", "0.9", "--t-phi", "0.6", "--t-imp", "0.7"]);
    assert_eq!(v["p"][0].as_f64(), Some(0.72));
    assert_eq!(ulogic(&["bounds", "--p-phi", "-0.1", "--p-imp", "0.9", "--t-phi", "0.6", "--t-imp", "0.7"]).0, 2);

    let (code, a, _) = ulogic(&["laws", "--algebra", "prob-ray", "--samples", "300", "--seed", "5"]);
    let (_, b, _) = ulogic(&["laws", "--algebra", "prob-ray", "--samples", "300", "--seed", "5"]);
    assert_eq!((code, &a), (0, &b));
    let env = Command::new(env!("CARGO_BIN_EXE_ulogic"))
        .args(["laws", "--algebra", "prob-ray", "--samples", "300"])
        .env("ULOGIC_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), a);
    let bad = Command::new(env!("CARGO_BIN_EXE_ulogic"))
        .args(["laws", "--algebra", "prob-ray"])
        .env("ULOGIC_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(ulogic(&[]).0, 2);
    assert_eq!(ulogic(&["taut", "--algebra", "godel-unit", "--formula", "p", "--strategy", "grid:0"]).0, 2);
    assert_eq!(ulogic(&["taut", "--algebra", "godel-unit", "--formula", "p", "--strategy", "exhaustive"]).0, 2);
    assert_eq!(ulogic(&["taut", "--algebra", "godel-unit", "--formula", "p", "--strategy", "grid:0.5", "--policy", "max"]).0, 2);
    assert_eq!(ulogic(&["catalogue", "--format", "yaml"]).0, 2);
    let (code, out, _) = ulogic(&["catalogue"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 11);
}
