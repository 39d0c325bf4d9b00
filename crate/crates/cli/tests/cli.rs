use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn gkm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkm"))
        .args(args)
        .output()
        .unwrap()
}

fn gkm_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gkm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn validate_accepts_a_fixture() {
    let o = gkm(&["validate", &fixture("cp2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["schema"], 1);
}

#[test]
fn betti_of_the_four_sphere() {
    let o = gkm(&["betti", &fixture("s4.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["betti"], serde_json::json!([1, 0, 1]));
}

#[test]
fn malformed_input_is_an_input_error() {
    let o = gkm_stdin(&["validate", "-"], b"{ not json");
    assert_eq!(o.status.code(), Some(3));
    let o = gkm(&["validate", "/nonexistent/graph.json"]);
    assert_eq!(o.status.code(), Some(3));
    let o = gkm(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn generated_models_validate() {
    for args in [
        &["model", "simplex", "3"][..],
        &["model", "sigma", "3"],
        &["model", "product", "D2", "S2"],
        &["model", "hirzebruch", "-2"],
        &["model", "hypercube", "4"],
    ] {
        let m = gkm(args);
        assert_eq!(m.status.code(), Some(0), "{args:?}");
        let v = gkm_stdin(&["validate", "-"], &m.stdout);
        assert_eq!(v.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_and_ignores_jobs() {
    for cmd in ["betti", "cover", "extend", "classify"] {
        let file = fixture("d2xs2.json");
        let a = gkm(&[cmd, &file]);
        let b = gkm(&[cmd, &file]);
        let c = gkm(&["--jobs", "4", cmd, &file]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert_eq!(a.stdout, c.stdout, "{cmd}");
    }
    let o = gkm(&["pipeline", "model", &fixture("hypercube3_quotient.json")]);
    let p = gkm(&[
        "--jobs",
        "8",
        "pipeline",
        "model",
        &fixture("hypercube3_quotient.json"),
    ]);
    assert_eq!(o.stdout, p.stdout);
}

#[test]
fn sphere_has_no_lift() {
    let o = gkm(&["--format", "text", "acs", &fixture("s4.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("NO_LIFT"));
    let o = gkm(&["--format", "text", "acs", &fixture("cp2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("LIFT_FOUND"));
}

#[test]
fn quotient_is_not_a_product() {
    let q = fixture("hypercube3_quotient.json");
    let o = gkm(&["pipeline", "classify", "--expect-product", &q]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["verdict"], "nontrivial_cover");
    let o = gkm(&["pipeline", "classify", &q]);
    assert_eq!(o.status.code(), Some(0));
    let o = gkm(&[
        "pipeline",
        "classify",
        "--expect-product",
        &fixture("hirzebruch1.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn quotient_model_report() {
    let o = gkm(&["pipeline", "model", &fixture("hypercube3_quotient.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["deck_order"], 2);
    assert_eq!(r["betti"]["betti"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn bott_tower_from_stdin() {
    let spec = br#"{"stages": [{"n": 1, "bundles": [[], []]}, {"n": 1, "bundles": [[0], [1]]}]}"#;
    let o = gkm_stdin(&["bott", "-"], spec);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["betti"], serde_json::json!([1, 2, 1]));
}
