use std::process::Command;

use paley_cli::{render, run, EXIT_HYPOTHESIS, EXIT_OK, EXIT_SIZE_CAP, EXIT_USAGE};
use serde_json::Value;

fn paley(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("paley").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = paley(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn verify_thirteen() {
    let v = json(&["verify", "--ring", "fq:13,1", "--k", "2", "--ell", "3"]);
    assert_eq!(v["formula_value"], "26");
    assert_eq!(v["oracle_value"], "26");
    assert_eq!(v["match"], true);
    assert_eq!(v["errata"], Value::Array(vec![]));
}

#[test]
fn formula_on_z25_is_zero() {
    let v = json(&["formula", "--ring", "zpk:5,2", "--k", "2", "--ell", "3"]);
    assert_eq!(v["formula_value"], "0");
    assert_eq!(v["oracle_value"], Value::Null);
    assert_eq!(v["intermediates"]["m"], "5");
}

#[test]
fn json_round_trips_byte_identically() {
    for args in [
        &["verify", "--ring", "fq:7,1", "--k", "3", "--ell", "4", "--structure"][..],
        &["table", "--id", "2", "--max-ell", "5"],
        &["reps", "--q", "31", "--form", "c2+27d2"],
        &["criteria", "--ring", "zpk:3,2", "--k", "2"],
    ] {
        let (code, out, _) = paley(args);
        assert_eq!(code, EXIT_OK);
        let parsed: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(format!("{}\n", render(&parsed)), out, "{args:?}");
    }
}

#[test]
fn table_csv_columns() {
    let (code, out, _) = paley(&["table", "--id", "3", "--max-ell", "4", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "ell,sequence_value,count,published_value,published_count,erratum_flag");
    assert_eq!(lines[4], "4,-12,95761250,22,283140000,true");
}

#[test]
fn table_errata_in_json() {
    let v = json(&["table", "--id", "2", "--max-ell", "5"]);
    let errata = v["errata"].as_array().unwrap();
    assert!(errata.iter().any(|e| e["column"] == "e_5" && e["computed"] == "1121" && e["published"] == "761"));
}

#[test]
fn representations() {
    let v = json(&["reps", "--q", "17", "--form", "e2+4f2"]);
    assert_eq!((v["a"].as_str(), v["b"].as_str(), v["valid"].as_bool()), (Some("1"), Some("2"), Some(true)));
    let v = json(&["reps", "--q", "31", "--form", "x2+27y2"]);
    assert_eq!(v["a"], "-2");
}

#[test]
fn criteria_disconnected_witness() {
    let v = json(&["criteria", "--ring", "fq:2,4", "--k", "5"]);
    assert_eq!(v["undirected"], true);
    assert_eq!(v["connected"], false);
    assert_eq!(v["search"]["residue_graph_connected"], false);
    assert_eq!(v["consistent"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(paley(&["formula", "--ring", "zpk:4,2", "--k", "2", "--ell", "3"]).0, EXIT_USAGE);
    assert_eq!(paley(&["formula", "--ring", "fq:13,1", "--k", "2", "--ell", "9"]).0, EXIT_USAGE);
    assert_eq!(paley(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(paley(&["formula", "--ring", "fq:7,1", "--k", "2", "--ell", "3"]).0, EXIT_HYPOTHESIS);
    assert_eq!(paley(&["formula", "--ring", "fq:13,1", "--k", "13", "--ell", "3"]).0, EXIT_HYPOTHESIS);
    let (code, out, _) = paley(&["oracle", "--ring", "fq:13,2", "--k", "2", "--ell", "3", "--max-clique-vertices", "100"]);
    assert_eq!(code, EXIT_SIZE_CAP);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "size_cap");
    assert_eq!(paley(&["--help"]).0, EXIT_OK);
}

#[test]
fn text_and_csv_formats() {
    let (_, out, _) = paley(&["verify", "--ring", "zpk:5,2", "--k", "2", "--ell", "4", "--format", "text"]);
    assert!(out.contains("match"), "{out}");
    let (_, out, _) = paley(&["oracle", "--ring", "fq:17,1", "--k", "2", "--ell", "4", "--format", "csv"]);
    assert_eq!(out, "ring,k,ell,formula_value,oracle_value,match\nfq:17,1,2,4,,0,\n".replace("fq:17,1", "\"fq:17,1\""));
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_paley"))
        .args(["verify", "--ring", "fq:13,1", "--k", "2", "--ell", "3", "--format", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("formula 26, enumeration 26"));
}
