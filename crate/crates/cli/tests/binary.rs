use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn qlpa(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qlpa"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn params_from_stdin_file_and_flag() {
    let params = r#"{"H": [[0, 2], [-2, 0]]}"#;
    let from_stdin = qlpa(&["canon"], Some(params));
    let path = std::env::temp_dir().join(format!("qlpa-canon-{}.json", std::process::id()));
    std::fs::write(&path, params).unwrap();
    let from_file = qlpa(&["canon", path.to_str().unwrap()], None);
    std::fs::remove_file(&path).unwrap();
    let from_flag = qlpa(&["canon", "--params", params], None);
    for out in [&from_stdin, &from_file, &from_flag] {
        assert_eq!(out.status.code(), Some(0));
        let r = report(out);
        assert_eq!(r["status"], "ok");
        assert_eq!(r["result"]["W"], json!([[1, 0], [0, 1]]));
        assert_eq!(r["result"]["m"], json!([2]));
        assert_eq!(r["result"]["rank"], json!(2));
    }
}

#[test]
fn exit_codes_follow_the_error_kind() {
    let domain = qlpa(&["canon", "--params", r#"{"H": [[0, 1], [1, 0]]}"#], None);
    assert_eq!(domain.status.code(), Some(1));
    let schema = qlpa(&["canon", "--params", r#"{"H": "S"}"#], None);
    assert_eq!(schema.status.code(), Some(2));
    assert_eq!(report(&schema)["pointer"], "/H");
    let syntax = qlpa(&["canon", "--params", "{"], None);
    assert_eq!(syntax.status.code(), Some(2));
    let unknown = qlpa(&["frobnicate", "--params", "{}"], None);
    assert_eq!(unknown.status.code(), Some(2));
    let missing_ell = qlpa(&["canon", "--mode", "root", "--params", r#"{"H": [[0, 1], [-1, 0]]}"#], None);
    assert_eq!(missing_ell.status.code(), Some(2));
    let bad_flag = qlpa(&["canon", "--mode", "complex"], None);
    assert_eq!(bad_flag.status.code(), Some(2));
}

#[test]
fn root_mode_and_window_flags() {
    let m = r#"{"H": [[0, 1, 0], [-1, 0, 0], [0, 0, 0]], "M": [[4, 0, 3], [0, 1, 0], [1, 0, 1]]}"#;
    let out = qlpa(&["aut-check", "--mode", "root", "--ell", "3", "--params", m], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["q_membership"], json!(true));

    let p = r#"{"P": "y^2 - ((1 - q^-1 x^2)/(1 - x)) y + (x - q^-1 x^2)/(1 - x)"}"#;
    let out = qlpa(&["factor2", "--window", "-1", "1", "--trunc", "8", "--params", p], None);
    let r = report(&out);
    assert_eq!(r["result"]["window"], json!([-1, 1]));
    assert_eq!(r["result"]["factorizations"].as_array().unwrap().len(), 2);
}

#[test]
fn text_format() {
    let out = qlpa(&["pfaffian", "--format", "text", "--params", r#"{"H": [[0, 1, 2, 0], [-1, 0, 0, 3], [-2, 0, 0, 1], [0, -3, -1, 0]]}"#], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "pfaffian: ok\npfaffian: -5\n");
}

#[test]
fn paper_examples_exit_zero() {
    let out = qlpa(&["paper-examples"], None);
    let r = report(&out);
    assert_eq!(out.status.code(), Some(0), "{r}");
    assert!(r["result"]["examples"].as_array().unwrap().iter().all(|e| e["passed"] == json!(true)));
}
