use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsionlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn expected_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus/expected")
}

fn temp(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("torsionlab-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn t2f2_lambek_quotient_has_sixteen_elements() {
    let o = run(&["quotient", "--ring", "t2f2.json", "--filter", "lambek"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["carrier_size"], 16);
    assert_eq!(v["ring_iso_hint"], "M2(F2)");
}

#[test]
fn z6_zero_derivation_agrees() {
    let o = run(&["agree", "--ring", "z6.json", "--filter1", "trivial", "--filter2", r#"{"ideals":[[0,2,4]]}"#, "--derivation", "zero.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["agree"], true);
}

#[test]
fn z6_quotient_by_even_ideal() {
    let v = json(&run(&["quotient", "--ring", "z6", "--filter", r#"{"ideals":[[0,2,4]]}"#]));
    assert_eq!(v["carrier_size"], 3);
    assert_eq!(v["q_kernel"], serde_json::json!([0, 3]));
    assert_eq!(v["ring_iso_hint"], "Z/3");
}

#[test]
fn verify_z6_passes_every_suite() {
    let o = run(&["verify", "--ring", "z6.json"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 25);
    assert!(reports.iter().all(|r| r["fail"] == 0 && r.get("wall_clock_ms").is_none()));
}

#[test]
fn verify_timings_and_selection() {
    let o = run(&["verify", "--ring", "dual", "--suite", "bland-uniqueness", "agreement", "--timings"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["suite"], "bland-uniqueness");
    assert!(lines[1]["wall_clock_ms"].is_u64());
}

#[test]
fn empty_suite_selection_is_an_empty_stream() {
    let o = run(&["verify", "--ring", "z4", "--suite"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn input_errors_exit_two() {
    let bad = temp("bad.json", r#"{"name":"x","size":2,"add":[[0,1],[1]],"mul":[[0,0],[0,1]],"zero":0,"one":1}"#);
    let o = run(&["analyze", "--ring", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 1"));
    assert_eq!(run(&["analyze", "--ring", "no-such-ring"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--ring", "z6", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["quotient", "--ring", "z6", "--filter", r#"{"ideals":[[0,1]]}"#]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let not_der = temp("notder.json", r#"{"name":"x","table":[0,1,2,3,4,5]}"#);
    assert_eq!(run(&["extend", "--ring", "z6", "--filter", "trivial", "--derivation", &not_der]).status.code(), Some(2));
}

#[test]
fn non_nested_filters_are_a_usage_error() {
    let o = run(&["agree", "--ring", "z6", "--filter1", "improper", "--filter2", "trivial", "--derivation", "zero"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn symmetric_commands() {
    let v = json(&run(&["symmetric", "quotient", "--ring", "z6", "--left", r#"{"ideals":[[0,2,4]]}"#, "--right", r#"{"ideals":[[0,2,4]]}"#]));
    assert_eq!(v["carrier_size"], 3);
    assert_eq!(v["q_kernel"], serde_json::json!([0, 3]));
    let o = run(&["symmetric", "extend", "--ring", "dual", "--filter", "sym-lambek", "--derivation", "d1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["unique"], true);
    let o = run(&["symmetric", "agree", "--ring", "dual", "--filter1", "sym-trivial", "--filter2", "sym-lambek", "--derivation", "d2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&run(&["symmetric", "analyze", "--ring", "z4"]));
    assert_eq!(v["tensor_size"], 4);
    assert_eq!(v["qsigma_max_characterized"], true);
}

#[test]
fn reports_match_fixtures_and_are_byte_stable() {
    for key in ["z4", "z6", "z2xz2", "f4", "dual", "t2f2"] {
        for verb in ["analyze", "census"] {
            let a = stdout(&run(&[verb, "--ring", key]));
            let b = stdout(&run(&[verb, "--ring", key]));
            assert_eq!(a, b, "{verb} {key} not byte-stable");
            let fixture = std::fs::read_to_string(expected_dir().join(format!("{key}.{verb}.json"))).unwrap();
            assert_eq!(a, fixture, "{verb} {key} differs from fixture");
        }
    }
    let a = stdout(&run(&["verify", "--ring", "dual"]));
    assert_eq!(a, stdout(&run(&["verify", "--ring", "dual"])));
}
