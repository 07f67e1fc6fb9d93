use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

const COMMANDS: [&str; 7] = ["frag", "normalize", "zr", "limit", "compactify", "fan", "check"];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(cmd: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{cmd}.json"))
}

fn schema(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schemas").join(name)).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn run(args: &[&str], stdin: Option<&[u8]>) -> (i32, Vec<u8>) {
    let mut child =
        Command::new(env!("CARGO_BIN_EXE_aschemes")).args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::null()).spawn().unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), out.stdout)
}

fn run_fixture(cmd: &str) -> (i32, Value) {
    let path = fixture(cmd);
    let (code, out) = run(&[cmd, path.to_str().unwrap()], None);
    (code, serde_json::from_slice(&out).unwrap())
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn fixtures_match_input_schemas() {
    for cmd in COMMANDS {
        let input: Value = serde_json::from_str(&std::fs::read_to_string(fixture(cmd)).unwrap()).unwrap();
        assert_valid(&schema(&format!("{cmd}.input.json")), &input);
    }
    let frag = schema("frag.input.json");
    assert!(!frag.is_valid(&serde_json::json!({"algebra": {"vars": ["x"]}, "gens": [3]})));
    assert!(!frag.is_valid(&serde_json::json!({"algebra": {"vars": ["x"], "extra": 1}, "gens": []})));
}

#[test]
fn fixtures_pass_and_match_output_schemas() {
    for cmd in COMMANDS {
        let (code, doc) = run_fixture(cmd);
        assert_eq!(code, 0, "{cmd}: {doc:#}");
        assert_eq!(doc["ok"], true);
        assert_eq!(doc["command"], cmd);
        assert_valid(&schema(&format!("{cmd}.output.json")), &doc);
    }
}

#[test]
fn frag_of_two_axes() {
    let (_, doc) = run_fixture("frag");
    assert_eq!(doc["result"]["size"], 5);
    assert_eq!(doc["result"]["points"], 3);
}

#[test]
fn compactified_line_is_proper() {
    let (_, doc) = run_fixture("compactify");
    assert_eq!(doc["result"]["proper"], true);
    assert_eq!(doc["result"]["added_points"], 1);
    assert_eq!(doc["result"]["model"]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn projective_line_has_three_places() {
    let (_, doc) = run_fixture("zr");
    let m = &doc["result"]["model"];
    assert_eq!(m["point_places"].as_array().unwrap().len(), 3);
    assert_eq!(m["uncentered"].as_array().unwrap().len(), 0);
    assert_eq!(m["centers"]["v[inf]"], "∞");
    let e = &doc["result"]["elements"][0];
    assert_eq!(e["valuations"]["v[t]"], 2);
    assert_eq!(e["valuations"]["v[inf]"], -1);
    assert_eq!(e["domain"], "ZR \\ {v[t - 1], v[inf]}");
}

#[test]
fn runs_are_reproducible() {
    let path = fixture("check");
    let a = run(&["check", path.to_str().unwrap(), "--seed", "7"], None);
    let b = run(&["check", path.to_str().unwrap(), "--seed", "7"], None);
    assert_eq!(a, b);
    let text = std::fs::read(&path).unwrap();
    let c = run(&["check", "--seed", "7"], Some(&text));
    assert_eq!(a, c);
}

#[test]
fn schema_errors_carry_a_path() {
    let (code, out) = run(&["frag"], Some(br#"{"algebra": {"vars": ["x"]}, "gens": [3]}"#));
    assert_eq!(code, 2);
    let doc: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(doc["error"]["kind"], "schema");
    assert_eq!(doc["error"]["path"], "gens[0]");
    assert_valid(&schema("frag.output.json"), &doc);

    let (code, out) = run(&["zr"], Some(br#"{"model": {"charts": [], "colour": 1}}"#));
    assert_eq!(code, 2);
    let doc: Value = serde_json::from_slice(&out).unwrap();
    assert!(doc["error"]["path"].as_str().unwrap().starts_with("model"));
}

#[test]
fn computation_errors_exit_one() {
    let (code, out) = run(&["frag"], Some(br#"{"algebra": {"vars": ["x"]}, "gens": ["y"]}"#));
    assert_eq!(code, 1);
    let doc: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(doc["error"]["kind"], "computation");
    assert_valid(&schema("frag.output.json"), &doc);
}

#[test]
fn dot_output() {
    let path = fixture("fan");
    let (code, out) = run(&["fan", path.to_str().unwrap(), "--format", "dot"], None);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("graph fan {"));
    assert_eq!(text.matches("origin --").count(), 4);
}
