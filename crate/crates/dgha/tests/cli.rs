use std::process::Command;

use dgha::error::{EXIT_OTHER, EXIT_SEMANTIC, EXIT_SYNTAX, EXIT_TRUNCATION};
use serde_json::Value;

fn dgha(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgha")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn job_file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = job_file(&dir, "ok.job", "generator x 1\ntruncate D=6\ncmd gldim\n");
    let syntax = job_file(&dir, "syntax.job", "generator x 1\ntruncate D=6\ncmd gldim {\n");
    let semantic = job_file(&dir, "semantic.job", "generator x 1\nrelation \"z\"\ntruncate D=6\ncmd gldim\n");
    let small = job_file(&dir, "small.job", "generator x 1\ntruncate D=1\ncmd gldim\n");
    assert_eq!(dgha(&[&ok]).0, 0);
    assert_eq!(dgha(&[&syntax]).0, EXIT_SYNTAX);
    assert_eq!(dgha(&[&semantic]).0, EXIT_SEMANTIC);
    assert_eq!(dgha(&[&small]).0, EXIT_TRUNCATION);
    let (code, _, err) = dgha(&["--example", "nope"]);
    assert_eq!(code, EXIT_OTHER);
    assert!(err.contains("nope"));
    let missing = dir.path().join("missing.job");
    assert_eq!(dgha(&[missing.to_str().unwrap()]).0, EXIT_OTHER);
}

#[test]
fn structured_report_has_the_common_keys() {
    let (code, out, _) = dgha(&["--example", "free1", "--structured"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["command", "field", "truncation", "module", "certified_upto", "verdict", "values", "evidence", "rules"]
    );
    assert_eq!(v["values"]["left"]["value"], serde_json::json!({ "Exact": 1 }));
}

#[test]
fn out_flag_and_cmd_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, _) =
        dgha(&["--example", "free1", "--cmd", "resolve", "--structured", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["command"], "resolve");
    assert_eq!(v["values"]["count"], 2);
    assert_eq!(v["verdict"], "terminated");
    // smoothness needs the trivial module
    assert_eq!(dgha(&["--example", "example61-envelope", "--cmd", "smoothness"]).0, EXIT_SEMANTIC);
}

#[test]
fn render_and_list() {
    let (code, out, _) = dgha(&["--example", "exterior", "--render"]);
    assert_eq!(code, 0);
    assert_eq!(out, "field Q\ngenerator y 1\nrelation \"y*y\"\ntruncate D=8 L=6\nassert_noetherian false\nmodule trivial_k\ncmd cone-length\n");
    let (_, list, _) = dgha(&["--list-examples"]);
    for name in ["example61", "example61-envelope", "free1", "free2", "exterior", "sym-exterior"] {
        assert!(list.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name}");
    }
}
