use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn hydra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hydra")).args(args).output().expect("run hydra")
}

fn json(args: &[&str]) -> (String, Value) {
    let out = hydra(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap();
    (text, value)
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn analyze_reports_rho_per_place() {
    let t3 = fixture("t3.json");
    let (text, v) = json(&["analyze", "--map", &t3, "--places", "2,3,inf"]);
    let rows = v["results"]["convergence"].as_array().unwrap();
    let rho: Vec<&str> = rows.iter().map(|r| r["rho"].as_str().unwrap()).collect();
    assert_eq!(rho, ["4", "1/3", "3/4"]);
    assert_eq!(rows[0]["guarantee"], "no-guarantee");
    assert_eq!(rows[1]["guarantee"], "almost-everywhere");
    assert_eq!(v["schema_version"], "1");
    let order: Vec<usize> = ["\"command\"", "\"inputs\"", "\"results\"", "\"schema_version\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn dist_matches_empirical() {
    let t3 = fixture("t3.json");
    let (_, v) = json(&[
        "dist", "--map", &t3, "--place", "3", "--exponent", "1", "--compare-empirical", "--depth", "20",
    ]);
    let ps: Vec<f64> = v["results"]["probabilities"].as_array().unwrap().iter().map(|r| num(&r["p"])).collect();
    for (p, want) in ps.iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0]) {
        assert!((p - want).abs() < 1e-12);
    }
    assert!(num(&v["results"]["total_variation"]) < 1e-2);

    let out = hydra(&["dist", "--map", &t3, "--place", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("w,probability"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn correspond_certifies_every_nonzero_cycle() {
    let t3 = fixture("t3.json");
    let (_, v) = json(&["correspond", "--map", &t3, "--range", "-100:100"]);
    let certs = v["results"]["certificates"].as_array().unwrap();
    // {1,2}, {-1}, {-5,-7,-10} and the 11-cycle through -17
    assert_eq!(certs.len(), 4);
    assert!(certs.iter().all(|c| c["verified"] == true));
    assert_eq!(v["results"]["special"], serde_json::json!([["0"]]));
    assert_eq!(v["results"]["reverse_scan"]["unmatched"], serde_json::json!([]));
}

#[test]
fn orbit_arrays_round_trip() {
    let t3 = fixture("t3.json");
    let (text, v) = json(&["orbit", "--map", &t3, "--start", "7"]);
    assert_eq!(v["results"]["cycle"], serde_json::json!(["1", "2"]));
    assert_eq!(v["results"]["tail"][0], "7");
    assert_eq!(v["results"]["status"], "preperiodic");
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn every_command_round_trips_through_json() {
    let t3 = fixture("t3.json");
    let runs: [&[&str]; 8] = [
        &["analyze", "--map", &t3, "--places", "2,3,inf"],
        &["orbit", "--map", &t3, "--start", "-17"],
        &["cycles", "--map", &t3, "--range", "-20:20"],
        &["numen", "--map", &t3, "--at", "11"],
        &["numen", "--map", &t3, "--at-rational", "-1/3"],
        &["charfn", "--map", &t3, "--place", "3", "--level", "2"],
        &["dist", "--map", &t3, "--place", "3", "--exponent", "2"],
        &["correspond", "--map", &t3, "--range", "-20:20", "--max-len", "6"],
    ];
    for args in runs {
        let (text, v) = json(args);
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text, "{args:?}");
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn numen_modes() {
    let t3 = fixture("t3.json");
    let (_, v) = json(&["numen", "--map", &t3, "--at", "3"]);
    assert_eq!(v["results"]["value"], "5/4");
    let (_, v) = json(&["numen", "--map", &t3, "--at-rational", "-3/7", "--place", "3"]);
    assert_eq!(v["results"]["value"], "-10");
    let (_, v) = json(&["numen", "--map", &t3, "--at", "-1", "--depth", "4"]);
    assert_eq!(v["results"]["mode"], "truncation");
    assert_eq!(v["results"]["value"], "65/16");
}

#[test]
fn charfn_tables() {
    let t3 = fixture("t3.json");
    let (_, v) = json(&["charfn", "--map", &t3, "--place", "3", "--level", "1"]);
    let row = &v["results"]["values"][1];
    assert_eq!(row["t"], "1/3");
    assert!((num(&row["re"]) + 0.5).abs() < 1e-12);
    assert!((num(&row["im"]) - 3f64.sqrt() / 6.0).abs() < 1e-12);

    let (_, v) = json(&[
        "charfn", "--map", &t3, "--place", "inf", "--method", "estimate", "--grid", "0.25,-0.25", "--depth", "12",
    ]);
    let vals = v["results"]["values"].as_array().unwrap();
    assert!((num(&vals[0]["im"]) + num(&vals[1]["im"])).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let t3 = fixture("t3.json");
    let bad = fixture("one_branch.json");
    let out = hydra(&["analyze", "--map", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected 2 branches"));

    assert_eq!(hydra(&["analyze", "--map", "no/such/file.json"]).status.code(), Some(2));
    assert_eq!(hydra(&["charfn", "--map", &t3, "--place", "2"]).status.code(), Some(3));
    assert_eq!(
        hydra(&["dist", "--map", &t3, "--place", "3", "--compare-empirical", "--depth", "30"]).status.code(),
        Some(4)
    );
    assert_eq!(
        hydra(&["dist", "--map", &t3, "--place", "3", "--compare-empirical", "--depth", "25", "--allow-large"])
            .status
            .code(),
        Some(0)
    );
}
