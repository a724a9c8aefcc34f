use std::path::{Path, PathBuf};

use vgrp::cli::run;
use vgrp::document::WorkbenchDocument;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn vgrp(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("vgrp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn input(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn shipped_documents_are_canonical() {
    for name in ["z4_boolean.json", "z4_lawvere.json", "q_morphism.json"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        assert_eq!(WorkbenchDocument::parse(&text).unwrap().to_canonical_json(), text, "{name}");
    }
}

#[test]
fn validate_reports_each_layer() {
    let (code, out, _) = vgrp(&["validate", "--input", &input("q_morphism.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("ok: true"));
    assert!(out.contains("morphisms[0].name: q"));
}

#[test]
fn classify_text_output() {
    let (code, out, _) = vgrp(&["classify", "--input", &input("z4_boolean.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("class.separated: false"));
    assert!(out.contains("class.symmetric: true"));
}

#[test]
fn cover_reports_kernel() {
    let (code, out, _) = vgrp(&["--format", "json", "cover", "--input", &input("q_morphism.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["covering"], false);
    assert_eq!(v["kernel"]["elements"], serde_json::json!([0, 2]));
    assert_eq!(v["kernel"]["class"]["indiscrete"], true);
}

#[test]
fn descent_window_flag() {
    let (code, out, _) = vgrp(&["--format", "json", "descent", "--input", &input("z4_lawvere.json"), "--window", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["radius"], 1);
    assert_eq!(v["window"]["points"], 12);
    assert_eq!(v["ok"], true);
    let (_, out, _) = vgrp(&["--format", "json", "descent", "--input", &input("z4_lawvere.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["radius"], 3);
}

#[test]
fn repeated_inputs_give_an_array() {
    let (code, out, _) = vgrp(&[
        "--format", "json", "classify", "--input", &input("z4_boolean.json"), "--input", &input("z4_lawvere.json"),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn pretorsion_command() {
    let (code, out, _) = vgrp(&["--format", "json", "pretorsion", "--input", &input("z4_boolean.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], true);
}

#[test]
fn input_errors_exit_2() {
    let (code, _, err) = vgrp(&["classify", "--input", "/nonexistent/doc.json"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    let (code, _, _) = vgrp(&["factorize", "--input", &input("z4_boolean.json")]);
    assert_eq!(code, 2);
    let (code, _, _) = vgrp(&["classify", "--input", &input("q_morphism.json"), "--morphism", "nope"]);
    assert_eq!(code, 2);
    let (code, _, _) = vgrp(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = vgrp(&["suite", "--suite-level", "huge"]);
    assert_eq!(code, 2);
}

#[test]
fn json_errors_carry_the_exit_code() {
    let (code, out, _) = vgrp(&["--format", "json", "classify", "--input", "/nonexistent/doc.json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["exit_code"], code);
}

#[test]
fn non_homomorphism_is_a_law_failure() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("q_morphism.json")).unwrap();
    // [0, 1, 1, 0] is not additive on Z4.
    let bad = text.replace("\"map\": [0, 1, 0, 1]", "\"map\": [0, 1, 1, 0]");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, bad).unwrap();
    let (code, out, _) = vgrp(&["--format", "json", "validate", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["morphisms"][0]["report"]["violations"][0]["law"], "group-hom");
}

#[test]
fn relative_target_paths() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("q_morphism.json")).unwrap();
    let doc = WorkbenchDocument::parse(&text).unwrap();
    let vgrp::document::Target::Inline(target) = &doc.morphisms[0].target else { panic!() };
    std::fs::write(dir.path().join("z2.json"), target.to_canonical_json()).unwrap();
    let mut by_path = doc.clone();
    by_path.morphisms[0].target = vgrp::document::Target::Path("z2.json".into());
    let path = dir.path().join("q.json");
    std::fs::write(&path, by_path.to_canonical_json()).unwrap();
    let (code, out, _) = vgrp(&["--format", "json", "factorize", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let golden = std::fs::read_to_string(data("golden/q_morphism.factorize.json")).unwrap();
    assert_eq!(out, golden);
}

#[test]
fn smoke_suite_passes() {
    let (code, out, _) = vgrp(&["--format", "json", "suite", "--suite-level", "smoke", "--seed-order", "canonical"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 8);
    assert_eq!(code, 0, "{out}");
}
