use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use cospan_core::linrel::compose_relations;
use cospan_core::openmarkov::{black_box, MarkovMorphism, OpenMarkov};
use cospan_core::opennet::OpenNet;
use cospan_core::{LinearRelation, RationalMatrix};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cospan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cospan")).args(args).output().unwrap()
}

fn cospan_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cospan"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn load<T: serde::de::DeserializeOwned>(name: &str) -> T {
    serde_json::from_str(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

#[test]
fn lump_with_fiber_weights() {
    let out = cospan(&["lump", &data("lump_example.json"), "--fiber-weights", "b1=1/3,b2=2/3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["format_version"], "1");
    assert_eq!(v["generator"]["states"], serde_json::json!(["a", "b", "c"]));
    assert_eq!(
        v["generator"]["H"],
        serde_json::json!([["-15", "0", "0"], ["15", "-6", "0"], ["0", "6", "0"]])
    );
    assert_eq!(v["section"][2][1], "2/3");
    assert_eq!(v["lumpable"], true);
}

#[test]
fn lump_defaults_to_uniform_section() {
    let v = json(&cospan(&["lump", &data("lump_example.json")]));
    assert_eq!(v["weights"]["b1"], "1/2");
    assert_eq!(v["generator"]["H"][1][0], "15");
}

#[test]
fn bad_weights_are_domain_errors() {
    let out = cospan(&["lump", &data("lump_example.json"), "--fiber-weights", "b1=1/3,b2=1/3"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["error"]["kind"], "BadWeights");
    let out = cospan(&["lump", &data("lump_example.json"), "--fiber-weights", "b1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn validate_reports_the_offending_column() {
    let out = cospan(&["validate", &data("bad_generator.json")]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "ColumnSumNonzero");
    assert!(v["error"]["message"].as_str().unwrap().contains("`y`"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column `y`"));
}

#[test]
fn validate_detects_each_kind() {
    for (file, kind) in [
        ("lump_example.json", "lump"),
        ("lumped_example.json", "open_markov"),
        ("lump_morphism.json", "markov_morphism"),
        ("water_formation.json", "open_net"),
    ] {
        let out = cospan(&["validate", &data(file)]);
        assert_eq!(code(&out), 0, "{file}");
        assert_eq!(json(&out)["kind"], kind);
    }
    let out = cospan_stdin(&["validate", "-"], br#"{"states":["x"],"H":[["0"]]}"#);
    assert_eq!(json(&out)["kind"], "generator");
}

#[test]
fn parse_errors_exit_with_two() {
    let out = cospan_stdin(&["validate", "-"], b"{\"H\": [");
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"]["kind"], "ParseError");

    let out = cospan_stdin(&["validate", "-"], br#"{"states":["x"],"H":"nope"}"#);
    assert_eq!(code(&out), 2);

    let out = cospan_stdin(&["validate", "-"], br#"{"format_version":"2","states":["x"],"H":[["0"]]}"#);
    assert_eq!(code(&out), 2);
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("format_version"));

    assert_eq!(code(&cospan(&["validate", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&cospan(&["frobnicate"])), 2);
    assert_eq!(code(&cospan_stdin(&["compose", "-", "-"], b"{}")), 2);
}

#[test]
fn compose_then_blackbox_pipeline() {
    let composed = cospan(&["compose", &data("intro_first.json"), &data("intro_second.json")]);
    assert_eq!(code(&composed), 0);
    let piped = cospan_stdin(&["blackbox", "-"], &composed.stdout);
    assert_eq!(code(&piped), 0);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("composite.json");
    std::fs::write(&path, &composed.stdout).unwrap();
    let direct = cospan(&["blackbox", path.to_str().unwrap()]);
    assert_eq!(json(&piped), json(&direct));

    let from_cli: LinearRelation = serde_json::from_value(json(&piped)).unwrap();
    let first: OpenMarkov = load("intro_first.json");
    let second: OpenMarkov = load("intro_second.json");
    let expected = compose_relations(&black_box(&first), &black_box(&second)).unwrap();
    assert_eq!(from_cli, expected);
}

#[test]
fn composite_generator_matches_the_worked_example() {
    let v = json(&cospan(&["compose", &data("intro_first.json"), &data("intro_second.json")]));
    let composite: OpenMarkov = serde_json::from_value(v).unwrap();
    assert_eq!(composite.states().labels(), ["a", "b", "c", "d", "y", "z"]);
    let h = |rows: &[&[(i64, i64)]]| {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| cospan_core::Rational::new(n, d)).collect())
                .collect(),
            6,
        )
        .unwrap()
    };
    let expected = h(&[
        &[(-1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (-2, 1), (1, 1), (0, 1), (0, 1), (0, 1)],
        &[(1, 2), (2, 1), (-5, 1), (2, 1), (0, 1), (0, 1)],
        &[(0, 1), (0, 1), (4, 1), (-16, 1), (1, 1), (0, 1)],
        &[(0, 1), (0, 1), (0, 1), (2, 1), (-1, 1), (1, 1)],
        &[(0, 1), (0, 1), (0, 1), (12, 1), (0, 1), (-1, 1)],
    ]);
    assert_eq!(composite.h(), &expected);
}

#[test]
fn emitted_documents_round_trip() {
    for args in [
        vec!["compose".to_string(), data("intro_first.json"), data("intro_second.json")],
        vec!["tensor".to_string(), data("intro_first.json"), data("lumped_example.json")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let v = json(&cospan(&args));
        let parsed: OpenMarkov = serde_json::from_value(v.clone()).unwrap();
        let mut again = serde_json::to_value(&parsed).unwrap();
        again["format_version"] = "1".into();
        assert_eq!(again, v);
    }
    let v = json(&cospan(&["compose", &data("water_formation.json"), &data("autoionization.json")]));
    let net: OpenNet = serde_json::from_value(v.clone()).unwrap();
    let mut again = serde_json::to_value(&net).unwrap();
    again["format_version"] = "1".into();
    assert_eq!(again, v);
}

#[test]
fn output_keys_are_sorted() {
    let out = cospan(&["compose", &data("intro_first.json"), &data("intro_second.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    assert_eq!(keys, sorted);
}

#[test]
fn chemistry_nets_compose_and_tensor() {
    let v = json(&cospan(&["compose", &data("water_formation.json"), &data("autoionization.json")]));
    assert_eq!(v["petri"]["species"].as_array().unwrap().len(), 5);
    assert_eq!(v["petri"]["transitions"].as_array().unwrap().len(), 2);
    let v = json(&cospan(&["tensor", &data("water_formation.json"), &data("autoionization.json")]));
    assert_eq!(v["petri"]["species"].as_array().unwrap().len(), 6);
    assert_eq!(v["petri"]["transitions"].as_array().unwrap().len(), 2);
}

#[test]
fn mixing_kinds_is_a_domain_error() {
    let out = cospan(&["compose", &data("intro_first.json"), &data("water_formation.json")]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["error"]["kind"], "KindMismatch");
    let out = cospan(&["compose", &data("intro_second.json"), &data("intro_first.json")]);
    assert_eq!(code(&out), 1);
}

#[test]
fn iso_finds_the_relabelling() {
    let out = cospan(&["iso", &data("edge.json"), &data("edge_renamed.json")]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["square"]["vertex"]["v1"], "w1");
    assert_eq!(v["square"]["edge"]["e"], "e'");
    let out = cospan(&["iso", &data("edge.json"), &data("water_formation.json")]);
    assert_eq!(code(&out), 1);
}

#[test]
fn morphism_checks() {
    let out = cospan(&["check-morphism", &data("lump_morphism.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["valid"], true);

    let mut doc: Value = load("lump_morphism.json");
    doc["target"]["H"][1][1] = "-5".into();
    doc["target"]["H"][2][1] = "5".into();
    let out = cospan_stdin(&["check-morphism", "-"], doc.to_string().as_bytes());
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert!(v["reason"].as_str().unwrap().contains("p⋆"));

    let parsed: MarkovMorphism = load("lump_morphism.json");
    assert!(parsed.validate().is_ok());
}

#[test]
fn lumpability_checks() {
    let out = cospan(&["check-lumpable", &data("lump_example.json")]);
    assert_eq!(json(&out)["lumpable"], true);
    let mut doc: Value = load("lump_example.json");
    doc["H"][3][1] = "5".into();
    doc["H"][1][1] = "-9".into();
    let out = cospan_stdin(&["check-lumpable", "-"], doc.to_string().as_bytes());
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["lumpable"], false);
}

#[test]
fn laws_verb_reports() {
    let out = cospan(&["laws", "linrel_strictness", "--seed", "1", "--cases", "20"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["suite"], "linrel_strictness");
    assert_eq!(v["failures"], serde_json::json!([]));
    assert_eq!(v["cases"], 20);

    let out = cospan(&["laws", "--cases", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["reports"].as_array().unwrap().len(), 13);
    assert_eq!(v["passed"], true);

    let out = cospan(&["laws", "bogus"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn blackbox_of_the_lump_example() {
    let v = json(&cospan(&["blackbox", &data("lump_example.json")]));
    assert_eq!(v["dom_dim"], 2);
    assert_eq!(v["cod_dim"], 2);
    assert_eq!(v["basis"], serde_json::json!([["1", "15", "0", "15"], ["0", "0", "1", "0"]]));
}
