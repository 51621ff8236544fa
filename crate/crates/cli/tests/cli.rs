use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
}

fn goedel(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_goedel"))
        .args(args)
        .env_remove("GOEDEL_BUDGET")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8"),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let run = goedel(&full);
    (run.code, serde_json::from_str(&run.stdout).expect("json output"))
}

fn file(dir: &TempDir, name: &str, text: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn tautology_holds() {
    let run = goedel(&["check", "--taut", "D p | ~p"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("holds"));
    assert_eq!(goedel(&["check", "--taut", "p | !p"]).code, 1);
}

#[test]
fn double_negation_is_not_entailed() {
    let dir = TempDir::new().unwrap();
    let t = file(&dir, "T.thy", "# double negation\n!!p\n");
    let (code, out) = json(&["check", "--entail", &t, "p"]);
    assert_eq!(code, 1);
    assert_eq!(out["result"]["holds"], false);
    assert_eq!(out["result"]["witness"]["relations"]["p"]["()"], "1/2");
}

#[test]
fn first_order_holds_only_up_to_the_bound() {
    let dir = TempDir::new().unwrap();
    let t = file(&dir, "T.thy", "forall x. P(x)\n");
    let run = goedel(&["--max-universe", "2", "check", "--entail", &t, "P(c)"]);
    assert_eq!(run.code, 2, "{}", run.stdout);
    let run = goedel(&["check", "--entail", &t, "P(c) & R(c)"]);
    assert_eq!(run.code, 1);
}

#[test]
fn property_suite_passes() {
    let (code, out) = json(&["--seed", "7", "lemmas", "--suite", "property", "--cases", "1000"]);
    assert_eq!(code, 0);
    assert_eq!(out["seed"], 7);
    let items = out["result"]["items"].as_array().unwrap();
    assert_eq!(items.len(), 11);
    for item in items {
        assert_eq!(item["cases"], 1000);
        assert_eq!(item["failures"], 0);
    }
}

#[test]
fn output_is_reproducible() {
    let args = [
        "--format", "json", "--seed", "3", "lemmas", "--suite", "eqd", "--cases", "10",
    ];
    assert_eq!(goedel(&args).stdout, goedel(&args).stdout);
}

#[test]
fn interpolate_and_separate() {
    let (code, out) = json(&["interpolate", "p & q", "q | r"]);
    assert_eq!(code, 0);
    assert_eq!(out["result"]["interpolant"], "q");
    let (code, out) = json(&["interpolate", "p", "q"]);
    assert_eq!(code, 1);
    assert_eq!(out["result"]["entailed"], false);

    let dir = TempDir::new().unwrap();
    let t = file(&dir, "T.thy", "p\n");
    let u = file(&dir, "U.thy", "~p & q\n");
    let (code, out) = json(&["separate", &t, &u]);
    assert_eq!(code, 0);
    assert!(out["result"]["separator"].is_string());
    let u = file(&dir, "U2.thy", "q\n");
    let run = goedel(&["separate", &t, &u]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("inseparable"));
}

#[test]
fn countermodel_trace() {
    let (code, out) = json(&["countermodel", "!!p", "p"]);
    assert_eq!(code, 0);
    assert_eq!(out["result"]["valuation"]["relations"]["p"]["()"], "1/2");
    assert_eq!(out["result"]["trace"]["square_commutes"], true);
    let (code, out) = json(&["countermodel", "p & q", "p"]);
    assert_eq!(code, 1);
    assert_eq!(out["result"]["entailed"], true);
}

#[test]
fn chains() {
    let dir = TempDir::new().unwrap();
    let input = file(
        &dir,
        "in.json",
        r#"{"b0":["0","1"],"b1":["0","a","1"],"b2":["0","b","1"],
            "f1":{"0":"0","1":"1"},"f2":{"0":"0","1":"1"}}"#,
    );
    let (code, out) = json(&["amalgamate", &input]);
    assert_eq!(code, 0);
    assert_eq!(
        out["result"]["chain"]["elements"],
        serde_json::json!(["0", "a", "b", "1"])
    );
    let dot = goedel(&["amalgamate", "--dot", &input]);
    assert!(dot.stdout.starts_with("digraph"));

    let chain = file(&dir, "chain.json", r#"{"elements":["lo","mid","hi"]}"#);
    let (code, out) = json(&["embed", &chain]);
    assert_eq!(code, 0);
    assert_eq!(out["result"]["embedding"][1]["value"], "1/2");

    let bad = file(&dir, "bad.json", r#"{"elements":["x"]}"#);
    assert_eq!(goedel(&["embed", &bad]).code, 3);
}

#[test]
fn lindenbaum_classes() {
    let dir = TempDir::new().unwrap();
    let v = file(
        &dir,
        "v.json",
        r#"{"universe":["*"],"relations":{"p":{"()":"1/2"},"q":{"()":"1"}}}"#,
    );
    let fs = file(&dir, "f.thy", "p\nq\nq -> p\n");
    let (code, out) = json(&["lindenbaum", &v, &fs]);
    assert_eq!(code, 0);
    let names: Vec<&str> = out["result"]["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["[bot]", "[p]", "[q]"]);
    let (code, out) = json(&["--depth-budget", "1", "lindenbaum", &v]);
    assert_eq!(code, 0);
    assert_eq!(out["result"]["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_goedel"))
        .args(["interpolate", "p & q", "q | r"])
        .env("GOEDEL_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
