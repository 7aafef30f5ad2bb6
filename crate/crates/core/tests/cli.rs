use std::process::{Command, Output};

use serde_json::Value;

fn isodeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isodeg")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = isodeg(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn primes(v: &Value) -> Vec<u64> {
    v["results"]["set"]["primes"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn degrees_at_23_and_19() {
    let v = json(&["degrees", "--prime", "23"]);
    assert_eq!(v["schema_version"], "1.0");
    assert_eq!(v["command"], "degrees");
    assert_eq!(v["results"]["report"]["d_lower"], 8);
    assert_eq!(json(&["degrees", "--prime", "19"])["results"]["report"]["d_lower"], 20);
}

#[test]
fn degrees_refuses_base_set() {
    let out = isodeg(&["degrees", "--prime", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("13 ∈ I_Q(1)"));
    assert!(out.stdout.is_empty());
}

#[test]
fn input_errors_exit_1() {
    for args in [
        &["degrees", "--prime", "15"][..],
        &["degrees", "--prime", "23", "--epsilon", "4"],
        &["degrees"],
        &["iq", "--d", "7"],
        &["iq", "--d", "7", "--upper-bound", "--assume-uniformity"],
        &["iq", "--d", "0", "--upper-bound"],
        &["verify", "--pmax", "3"],
        &["orbits", "--prime", "23", "--group", "cns-power", "--exponent", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(isodeg(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(isodeg(&["--help"]).status.code(), Some(0));
    assert_eq!(isodeg(&["--version"]).status.code(), Some(0));
}

#[test]
fn iq_examples() {
    let v = json(&["iq", "--d", "7", "--upper-bound"]);
    assert_eq!(primes(&v), vec![2, 3, 5, 7, 11, 13, 17, 37]);
    assert_eq!(v["results"]["set"]["rule"], "unconditional-upper-bound");
    assert_eq!(v["assumptions"].as_array().unwrap().len(), 0);

    let v = json(&["iq", "--d", "20", "--assume-uniformity"]);
    assert!(primes(&v).contains(&19));
    assert_eq!(v["assumptions"], serde_json::json!(["serre-uniformity"]));

    let v = json(&["iq", "--d", "8", "--upper-bound"]);
    assert!(primes(&v).contains(&23));
}

#[test]
fn output_is_byte_stable() {
    for format in ["json", "csv", "table"] {
        let args = ["degrees", "--prime", "29", "--format", format];
        assert_eq!(isodeg(&args).stdout, isodeg(&args).stdout, "{format}");
    }
}

#[test]
fn csv_and_table_formats() {
    let out = isodeg(&["iq", "--d", "8", "--upper-bound", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("prime,in_iq1,rule"));
    assert_eq!(lines.count(), 9);
    assert!(text.contains("\n23,false,"));

    let out = isodeg(&["orbits", "--prime", "23", "--group", "cns-plus-power", "--exponent", "3", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["23", "Cns+^3", "lines", "2", "8", "8", "16"]));
}

#[test]
fn epsilon_override_is_recorded() {
    let a = json(&["degrees", "--prime", "23", "--epsilon", "7"]);
    let b = json(&["degrees", "--prime", "23"]);
    assert_eq!(a["parameters"]["epsilon"], 7);
    assert_eq!(b["parameters"]["epsilon"], 5);
    assert_eq!(a["results"]["report"]["d_lower"], b["results"]["report"]["d_lower"]);
}

#[test]
fn orbits_gl2_is_transitive() {
    let v = json(&["orbits", "--prime", "11", "--group", "gl2"]);
    assert_eq!(v["results"]["partitions"]["lines"]["sizes"], serde_json::json!([12]));
    assert_eq!(v["results"]["partitions"]["vectors"]["sizes"], serde_json::json!([120]));
}

#[test]
fn verify_passes_small_range() {
    let v = json(&["verify", "--pmax", "13", "--dmax", "20"]);
    assert_eq!(v["results"]["passed"], true);
    assert!(v["results"]["checks"].as_array().unwrap().iter().any(|c| c["name"] == "oracle-equivalence"));
    let v = json(&["verify", "--pmax", "13", "--skip-oracle"]);
    assert!(!v["results"]["checks"].as_array().unwrap().iter().any(|c| c["name"] == "oracle-equivalence"));
}
