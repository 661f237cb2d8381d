use hydra_demo::{charfn, distribution, orbit_path};
use serde_json::Value;

const T3: &str = r#"{"p": 2, "branches": [{"r": "1/2", "c": "0"}, {"r": "3/2", "c": "1/2"}]}"#;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn distribution_mod_three() {
    let v = parse(distribution(T3, 3, 1).unwrap());
    let ps: Vec<f64> = v["probabilities"].as_array().unwrap().iter().map(|r| r["p"].as_f64().unwrap()).collect();
    for (p, want) in ps.iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0]) {
        assert!((p - want).abs() < 1e-12, "{ps:?}");
    }
}

#[test]
fn charfn_values_lie_in_the_disk() {
    let v = parse(charfn(T3, 3, 2).unwrap());
    let rows = v["values"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0]["t"], "0");
    for r in rows {
        let (re, im) = (r["re"].as_f64().unwrap(), r["im"].as_f64().unwrap());
        assert!(re.hypot(im) <= 1.0 + 1e-12);
    }
}

#[test]
fn orbit_of_seven() {
    let v = parse(orbit_path(T3, "7", 1000).unwrap());
    assert_eq!(v["status"], "preperiodic");
    assert_eq!(v["cycle"], serde_json::json!(["1", "2"]));
}

#[test]
fn errors_are_messages() {
    assert!(charfn(T3, 2, 1).unwrap_err().contains("rho"));
    assert!(distribution(T3, 3, 20).unwrap_err().contains("demo limit"));
    assert!(orbit_path(T3, "x", 10).is_err());
    assert!(orbit_path("{}", "1", 10).is_err());
}
