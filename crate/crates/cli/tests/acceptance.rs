//! Acceptance criteria 1 to 11. One line per criterion; run with `--nocapture` to see them.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use qrel_core::selftest;

const SEED: u64 = 0;

/// Criterion number, suite, runtime limit in seconds.
const SUITE_CRITERIA: [(usize, &str, f64); 10] = [
    (1, "classical", 60.0),
    (2, "lattice", 10.0),
    (3, "dagger-compact", 30.0),
    (4, "quantifier", 60.0),
    (5, "equality", 20.0),
    (6, "correspondence", 30.0),
    (7, "hamming", 30.0),
    (8, "games", 10.0),
    (9, "quantum-group", 60.0),
    (10, "weaver", 20.0),
];

/// Documented `verify` exit code of each shipped example.
const EXPECTED: [(&str, i32); 9] = [
    ("counterexamples.qrel", 1),
    ("functions.qrel", 0),
    ("games.qrel", 0),
    ("graph.qrel", 0),
    ("groups.qrel", 0),
    ("hamming.qrel", 0),
    ("magic.qrel", 0),
    ("nearly.qrel", 3),
    ("poset.qrel", 0),
];

fn run_suite(name: &str, limit: f64) -> Result<String, String> {
    let s = selftest::suite(name).ok_or_else(|| format!("no suite `{name}`"))?;
    let t = Instant::now();
    let rep = (s.run)(SEED, s.default_cases);
    let secs = t.elapsed().as_secs_f64();
    let summary = format!(
        "{} cases, {} checks, max margin {:.1e}, {secs:.2}s of {limit}s",
        rep.cases, rep.checks, rep.max_margin
    );
    if !rep.passed() {
        return Err(format!("{summary}; {} failures: {}", rep.failures, rep.examples.join("; ")));
    }
    if secs >= limit {
        return Err(format!("{summary}; over the time limit"));
    }
    Ok(summary)
}

fn qrel(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qrel")).args(args).env_remove("QREL_TOL").output().expect("binary runs")
}

fn corpus() -> Result<String, String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qrel"))
        .collect();
    files.sort();
    if files.len() < 6 {
        return Err(format!("only {} example files", files.len()));
    }
    let mut problems = Vec::new();
    for f in &files {
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        let path = f.to_string_lossy();
        let Some(&(_, want)) = EXPECTED.iter().find(|(n, _)| *n == name) else {
            problems.push(format!("{name} has no documented exit code"));
            continue;
        };
        let check = qrel(&["check", &path]).status.code();
        if check != Some(0) {
            problems.push(format!("check {name} exited {check:?}"));
        }
        let args = ["verify", &path, "--output", "json", "--no-timings", "--seed", "7"];
        let a = qrel(&args);
        let b = qrel(&args);
        if a.status.code() != Some(want) {
            problems.push(format!("verify {name} exited {:?}, documented {want}", a.status.code()));
        }
        if a.stdout != b.stdout {
            problems.push(format!("verify {name} JSON differs between runs"));
        }
        if serde_json::from_slice::<serde_json::Value>(&a.stdout).is_err() {
            problems.push(format!("verify {name} JSON does not parse"));
        }
    }
    if problems.is_empty() {
        Ok(format!("{} files, exit codes as documented, JSON byte-identical", files.len()))
    } else {
        Err(problems.join("; "))
    }
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    let mut report = |n: usize, r: Result<String, String>| match r {
        Ok(msg) => println!("criterion {n}: PASS ({msg})"),
        Err(msg) => {
            println!("criterion {n}: FAIL ({msg})");
            failed.push(n);
        }
    };
    for (n, name, limit) in SUITE_CRITERIA {
        report(n, run_suite(name, limit));
    }
    report(11, corpus());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
