//! End-to-end runs of the binary: exit codes and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn motgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motgraph")).args(args).output().unwrap()
}

fn write(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

/// G₀(a) in a file private to the calling test (tests run in parallel).
fn g0(tag: &str) -> String {
    write(&format!("g0-{tag}.json"), r#"{"vertices":1,"edges":[{"src":0,"dst":0,"label":"a"}]}"#)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn unit_loop_is_rejected() {
    let f = write("unit.json", r#"{"vertices":2,"edges":[{"src":0,"dst":1,"label":"1"},{"src":1,"dst":0,"label":"1"}]}"#);
    let o = motgraph(&["admissible", "--json", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("UnitLoop"));
    let o = motgraph(&["admissible", &g0("adm")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn boundary_of_g0_is_empty() {
    let o = motgraph(&["diff", "--json", &g0("diff")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap(), serde_json::json!([]));
}

#[test]
fn herbert4_verifies() {
    let o = motgraph(&["verify-example", "herbert4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("herbert4: PASS"));
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(motgraph(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(motgraph(&["verify-example", "nope"]).status.code(), Some(2));
    let bad = write("bad.json", "{\"vertices\": 1");
    assert_eq!(motgraph(&["canonicalize", &bad]).status.code(), Some(2));
    assert_eq!(motgraph(&["period", "--labels", "0.5,3"]).status.code(), Some(2));
}

#[test]
fn budget_exceeded() {
    // a 3-cycle with a chord: two simple cycles
    let f = write(
        "two-cycles.json",
        r#"{"vertices":3,"edges":[{"src":0,"dst":1,"label":"a"},{"src":1,"dst":2,"label":"b"},{"src":2,"dst":0,"label":"c"},{"src":2,"dst":1,"label":"d"}]}"#,
    );
    assert_eq!(motgraph(&["admissible", &f]).status.code(), Some(0));
    assert_eq!(motgraph(&["--budget-cycles", "1", "admissible", &f]).status.code(), Some(3));
}

#[test]
fn lift_witness_and_decompose() {
    let eps = write(
        "eps1.json",
        r#"{"terms":[
            {"coeff":1,"graph":{"vertices":2,"edges":[{"src":1,"dst":0,"label":"a0"},{"src":1,"dst":0,"label":"1"},{"src":0,"dst":1,"label":"a1"}]}},
            {"coeff":-1,"graph":{"vertices":2,"edges":[{"src":0,"dst":1,"label":"1/a0"},{"src":1,"dst":0,"label":"1"},{"src":0,"dst":1,"label":"a1"}]}}]}"#,
    );
    assert_eq!(motgraph(&["decompose", &eps]).status.code(), Some(0));
    let o = motgraph(&["lift", "--json", &eps]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap().as_array().unwrap().is_empty());
    // a single two-bead necklace is not decomposable on its own
    let one = write(
        "necklace2.json",
        r#"{"vertices":3,"edges":[{"src":2,"dst":0,"label":"a0"},{"src":1,"dst":0,"label":"1"},{"src":0,"dst":1,"label":"a1"},
            {"src":2,"dst":1,"label":"1"},{"src":1,"dst":2,"label":"a2"}]}"#,
    );
    assert_eq!(motgraph(&["decompose", &one]).status.code(), Some(1));
    assert_eq!(motgraph(&["lift", &one]).status.code(), Some(1));
    // ∂G₀(a) = 0 matches the empty target only through the zero combination
    let empty = write("empty.json", r#"{"terms":[]}"#);
    let o = motgraph(&["witness", "--json", &empty, &g0("wit")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()["witness"], serde_json::json!(["0"]));
}

#[test]
fn necklace_and_circular_check() {
    for n in ["1", "2", "3"] {
        assert_eq!(motgraph(&["necklace", n]).status.code(), Some(0));
    }
    assert_eq!(motgraph(&["necklace", "1", "--labels", "2,3"]).status.code(), Some(0));
    assert_eq!(motgraph(&["necklace", "2", "--labels", "2,3"]).status.code(), Some(2));
    let o = motgraph(&["circular-check", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("closed\n"));
}

#[test]
fn period_prints_json() {
    let o = motgraph(&["period", "--labels", "2,3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for k in ["value", "error", "summands"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [&["necklace", "--json", "2"][..], &["emit-cycle", "--json", &g0("det")], &["verify-example", "--json", "slashedbox-5"]] {
        let (a, b) = (motgraph(args), motgraph(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
