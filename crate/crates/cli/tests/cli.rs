use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;

fn qrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrel"))
        .args(args)
        .env_remove("QREL_TOL")
        .output()
        .expect("binary runs")
}

fn example(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qrel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn eval_prints_truth_of_a_sentence() {
    let o = qrel(&["eval", "--formula", "refl", &example("graph.qrel")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("formula refl = true"));
}

#[test]
fn eval_with_an_explicit_context() {
    let o = qrel(&["eval", "--formula", "loop", "--context", "xs:X*,x:X", &example("graph.qrel"), "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["items"][0]["ranks"], serde_json::json!([2]));
    assert_eq!(v["items"][0]["value"], serde_json::Value::Null);
    let bad = qrel(&["eval", "--formula", "loop", "--context", "x:X,xs:X", &example("graph.qrel")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_named_kind_from_positionals() {
    let o = qrel(&["verify", "magic-unitary", "P", &example("magic.qrel"), "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["items"][0]["passed"], true);
    assert_eq!(v["items"][0]["kind"], "magic-unitary");
    let o = qrel(&["verify", "--kind", "graph", "--names", "R", "--", &example("graph.qrel")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn failing_condition_reports_id_and_margin() {
    let o = qrel(&["verify", "surjective", "g", &example("counterexamples.qrel"), "--output", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let conds = v["items"][0]["conditions"].as_array().unwrap();
    let failed: Vec<&serde_json::Value> = conds.iter().filter(|c| c["passed"] == false).collect();
    assert!(failed.iter().any(|c| c["id"] == "surjective.surjective" && c["margin"].as_f64().unwrap() > 0.5));
}

#[test]
fn parse_errors_exit_two_with_located_diagnostics() {
    let p = scratch("bad.qrel", "qset X { atoms = [2] }\nformula f := forall x in X R(x)\n");
    let o = qrel(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.qrel:2:28: error: expected `.`"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    let f = example("graph.qrel");
    assert_eq!(qrel(&["check", "--tol", "1e-2", &f]).status.code(), Some(2));
    assert_eq!(qrel(&["check", "/nonexistent/x.qrel"]).status.code(), Some(2));
    assert_eq!(qrel(&["check"]).status.code(), Some(2));
    assert_eq!(qrel(&["verify", "nonsense", "R", &f]).status.code(), Some(2));
    assert_eq!(qrel(&["verify", "graph", "Nope", &f]).status.code(), Some(2));
    assert_eq!(qrel(&["eval", "--formula", "nope", &f]).status.code(), Some(2));
    assert_eq!(qrel(&["selftest", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(qrel(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qrel(&["--help"]).status.code(), Some(0));
}

#[test]
fn tolerance_from_environment_and_flag() {
    let f = example("nearly.qrel");
    assert_eq!(qrel(&["verify", &f]).status.code(), Some(3));
    let env = |t: &str, extra: &[&str]| {
        let mut args = vec!["verify", f.as_str(), "--output", "json"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_qrel")).args(&args).env("QREL_TOL", t).output().unwrap()
    };
    let o = env("1e-6", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["tol"], 1e-6);
    let o = env("1e-6", &["--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["tol"], 1e-8);
    assert_eq!(env("5", &[]).status.code(), Some(2));
}

#[test]
fn selftest_runs_a_chosen_suite() {
    let o = qrel(&["selftest", "--suite", "equality", "--suite", "classical", "--cases", "3", "--seed", "4", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["items"].as_array().unwrap().len(), 2);
    assert!(v["items"][0]["timings_ms"].as_f64().unwrap() >= 0.0);
}

const CORPUS: [&str; 4] = ["graph.qrel", "functions.qrel", "poset.qrel", "games.qrel"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mangled_input_never_panics(which in 0usize..CORPUS.len(), cut in 0usize..2000, drop in 0usize..12, junk in "[ -~\n]{0,6}") {
        let text = std::fs::read_to_string(example(CORPUS[which])).unwrap();
        let mut at = cut.min(text.len());
        while !text.is_char_boundary(at) {
            at -= 1;
        }
        let mut end = (at + drop).min(text.len());
        while !text.is_char_boundary(end) {
            end -= 1;
        }
        let mangled = format!("{}{}{}", &text[..at], junk, &text[end..]);
        let p = scratch(&format!("m{which}-{cut}-{drop}.qrel"), &mangled);
        let o = qrel(&["verify", p.to_str().unwrap(), "--output", "json"]);
        let code = o.status.code();
        prop_assert!(matches!(code, Some(0..=3)), "{code:?}");
        let v = json(&o);
        for d in v["diagnostics"].as_array().unwrap() {
            prop_assert!(!d["message"].as_str().unwrap().starts_with("internal error"), "{d}\n{mangled}");
        }
    }
}
