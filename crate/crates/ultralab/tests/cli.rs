use std::process::Command;

use serde_json::Value;
use ultralab::cli::run;

fn data(name: &str) -> String {
    format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> (String, i32) {
    let mut v = vec!["ultralab".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run(&v)
}

fn json(args: &[&str]) -> Value {
    let (out, code) = cli(args);
    assert_eq!(code, 0, "{out}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn gamma_aep_is_no_definitive() {
    let (class, inst) = (format!("age:{}", data("gamma.json")), data("gamma_aep.json"));
    let v = json(&["--bound", "4", "amalg", "check", "--property", "aep", "--class", &class, "--instance", &inst]);
    assert_eq!(v["outcome"], "no-definitive");
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn omega_of_ten_is_one() {
    assert_eq!(json(&["rado", "omega", "10"]), Value::from(1));
    assert_eq!(cli(&["--format", "text", "rado", "omega", "10"]).0.trim(), "1");
}

#[test]
fn equal_branches_are_at_distance_zero() {
    let v = json(&["limit", "dist", "--a", r#"{"prefix":[2]}"#, "--b", r#"{"prefix":[2]}"#]);
    assert_eq!(v, "zero");
    let v = json(&["limit", "dist", "--a", r#"{"prefix":[2]}"#, "--b", r#"{"prefix":[8]}"#]);
    assert_eq!(v, serde_json::json!({"val": 0}));
}

#[test]
fn k2_values() {
    let k2 = data("k2.json");
    let tuple = ["--tuple", r#"{"prefix":[0]}"#, "--tuple", r#"{"prefix":[1]}"#];
    let mut args = vec!["--depth", "4", "limit", "lower", "--cochain", &k2];
    args.extend(tuple);
    let v = json(&args);
    assert_eq!((&v["relation"], &v["value"]), (&Value::from("rho"), &serde_json::json!({"val": 1})));
    args[3] = "upper";
    let (out, code) = cli(&[&["--format", "text"], &args[..]].concat());
    assert_eq!((out.trim(), code), ("1 exact=true", 0));
}

#[test]
fn witness_on_words() {
    let v = json(&["rado", "witness", "--adj", "ε,1", "--nonadj", "0", "--target", "0"]);
    assert_eq!(v["witness"], "101");
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["frobnicate"]).1, 1);
    assert_eq!(cli(&[]).1, 1);
    assert_eq!(cli(&["rado", "edge", "x", "1"]).1, 2);
    assert_eq!(cli(&["--format", "dot", "rado", "omega", "3"]).1, 2);
    assert_eq!(cli(&["limit", "dist", "--a", r#"{"prefix":[2,5]}"#, "--b", r#"{"prefix":[2]}"#]).1, 2);
    assert_eq!(cli(&["--help"]).1, 0);
}

#[test]
fn game_output_round_trips() {
    let (out, code) = cli(&["--depth", "4", "game", "extend", "--pairs", "[]", "--rounds", "3"]);
    assert_eq!(code, 0, "{out}");
    let first: Value = serde_json::from_str(&out).unwrap();
    let again = json(&["--depth", "4", "game", "extend", "--pairs", &out, "--rounds", "0"]);
    assert_eq!(first["pairs"], again["pairs"]);
}

#[test]
fn certificates_are_deterministic() {
    let swap = r#"[{"from":{"prefix":[2]},"to":{"prefix":[8]}},{"from":{"prefix":[8]},"to":{"prefix":[2]}}]"#;
    let args = ["--seed", "7", "shift", "conjugate", "--pairs", swap, "--samples", "5"];
    let a = cli(&args);
    assert_eq!(a.1, 0, "{}", a.0);
    assert_eq!(a, cli(&args));
    let v: Value = serde_json::from_str(&a.0).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn binary_prints_and_exits() {
    let bin = env!("CARGO_BIN_EXE_ultralab");
    let out = Command::new(bin).args(["rado", "omega", "10"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1");
    let out = Command::new(bin).args(["rado", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
