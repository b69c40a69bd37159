use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::NamedTempFile;

const CORPUS: &str = include_str!("../../core/corpus/paper_examples.iitt");

fn iitt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iitt"))
        .args(args)
        .env_remove("IITT_FUEL")
        .output()
        .unwrap()
}

fn source(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn check(text: &str, extra: &[&str]) -> Output {
    let f = source(text);
    let mut args = vec!["check", f.path().to_str().unwrap()];
    args.extend(extra);
    iitt(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn repl(input: &str, extra: &[&str]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_iitt"))
        .arg("repl")
        .args(extra)
        .env_remove("IITT_FUEL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn corpus_checks() {
    let o = check(CORPUS, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("infer: Set1"));
}

#[test]
fn empty_file_is_fine() {
    let o = check("", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn relevant_use_of_irrelevant_variable_fails() {
    let o = check("#check (fun [x : Set0] => x) : [x : Set0] -> Set0;", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error[TYPE]"), "{}", stderr(&o));
}

#[test]
fn expected_failure_succeeds() {
    let o = check(
        "#fail #check (fun [x : Set0] => x) : [x : Set0] -> Set0;",
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parse_and_scope_errors_exit_2() {
    assert_eq!(check("#check Set0 :", &[]).status.code(), Some(2));
    assert_eq!(check("#infer nope;", &[]).status.code(), Some(2));
}

#[test]
fn unreadable_file_exits_2() {
    let o = iitt(&["check", "/nonexistent/file.iitt"]);
    assert_eq!(o.status.code(), Some(2));
}

// Every well-typed term normalises, so budgets are exhausted by starving
// an ordinary redex.
const REDEX: &str = "#whnf (fun (x : Unit) => x) ();";

#[test]
fn running_out_of_fuel_exits_3() {
    let o = check(REDEX, &["--fuel", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("FUEL"));
}

#[test]
fn fuel_defaults_from_the_environment() {
    let f = source("#whnf (fun (x : Unit) => x) ();");
    let o = Command::new(env!("CARGO_BIN_EXE_iitt"))
        .args(["check", f.path().to_str().unwrap()])
        .env("IITT_FUEL", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_output() {
    let o = check("#infer Set0;\n#infer Set0 Set0;", &["--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let items = v["items"].as_array().unwrap();
    assert_eq!(items.len(), 2);
    assert_eq!(items[0]["status"], "ok");
    assert_eq!(items[0]["kind"], "infer");
    assert_eq!(items[0]["output"], "Set1");
    assert_eq!(items[0]["span"]["line"], 1);
    assert_eq!(items[1]["status"], "error");
    assert_eq!(items[1]["span"]["line"], 2);
    assert_eq!(items[1]["diagnostic"]["code"], "TYPE");
}

#[test]
fn json_parse_error() {
    let o = check("#infer (", &["--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["items"][0]["kind"], "parse");
    assert_eq!(v["items"][0]["diagnostic"]["code"], "PARSE");
}

#[test]
fn dummy_needs_the_flag() {
    let src = "#check fun (U : Set0) (f : [x : U] -> Unit) => f [irr] : (U : Set0) -> ([x : U] -> Unit) -> Unit;";
    assert_eq!(check(src, &[]).status.code(), Some(1));
    assert_eq!(check(src, &["--allow-irr"]).status.code(), Some(0));
}

#[test]
fn erase_styles() {
    let src = "#erase fun (f : Unit -> Unit) (x : Unit) => f x;";
    assert!(stdout(&check(src, &[])).contains("λx y. x y"));
    let o = check(src, &["--erase-style", "debruijn"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("λx y. x y"), "{}", stdout(&o));
}

#[test]
fn repl_session() {
    let o = repl(
        "#infer Set0;\n#whnf (fun (x : Unit) => x) ();\n\
         #eq fun (f : Unit -> Unit) (x : Unit) => x\n  = fun (f : Unit -> Unit) (x : Unit) => f x\n  : (Unit -> Unit) -> Unit -> Unit;\n\
         def u : Unit := ();\n:ctx\n#infer u u;\n#check u : Unit;\n:quit\n#infer Set1;\n",
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(
        lines,
        ["Set1", "()", "accepted", "ok", "u : Unit", "ok"],
        "{}",
        stderr(&o)
    );
    assert!(stderr(&o).contains("error[TYPE]"));
}

#[test]
fn repl_fuel_command() {
    let o = repl(&format!(":fuel 0\n{REDEX}\n:fuel\n"), &[]);
    assert!(stderr(&o).contains("FUEL"));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn test_runs_named_suites() {
    let o = iitt(&["test", "--suite", "oracle", "--size", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS oracle (size 7)"));
}

#[test]
fn unknown_suite_exits_2() {
    let o = iitt(&["test", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown suite"));
}
