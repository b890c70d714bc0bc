use std::fmt::Write;

use qrel_core::structures::{Path, Status, VerificationReport, WARN_TOL};
use serde::Serialize;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_WARN: i32 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct CondOut {
    pub id: String,
    pub path: Path,
    pub passed: bool,
    pub status: Status,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Item {
    pub file: Option<String>,
    pub name: String,
    pub kind: String,
    pub passed: Option<bool>,
    pub value: Option<String>,
    pub status: Status,
    pub conditions: Vec<CondOut>,
    pub margins: Vec<f64>,
    /// Block ranks of an interpreted formula.
    pub ranks: Vec<usize>,
    pub notes: Vec<String>,
    pub timings_ms: Option<f64>,
}

impl Item {
    pub fn new(file: Option<&str>, name: &str, kind: &str) -> Self {
        Item {
            file: file.map(str::to_string),
            name: name.to_string(),
            kind: kind.to_string(),
            passed: None,
            value: None,
            status: Status::Pass,
            conditions: Vec::new(),
            margins: Vec::new(),
            ranks: Vec::new(),
            notes: Vec::new(),
            timings_ms: None,
        }
    }

    pub fn from_report(file: &str, name: &str, rep: &VerificationReport) -> Self {
        let mut it = Item::new(Some(file), name, &rep.kind);
        it.status = rep.status();
        it.passed = Some(it.status == Status::Pass);
        it.conditions = rep
            .conditions
            .iter()
            .map(|c| CondOut {
                id: c.id.clone(),
                path: c.path,
                passed: c.passed,
                status: c.status,
                margin: c.margin,
            })
            .collect();
        it.margins = rep.conditions.iter().map(|c| c.margin).collect();
        it.notes = rep.notes.clone();
        for g in rep.disagreements() {
            it.notes.push(format!("direct and formula paths disagree on `{g}`"));
        }
        it
    }
}

/// Verdict of a sentence expected to be `expect`, given its distance from true.
pub fn judge_truth(margin: f64, tol: f64, expect: bool) -> Status {
    let warn = WARN_TOL.max(tol);
    let holds = margin <= tol;
    let unsure = margin > tol && margin <= warn;
    if unsure {
        Status::Warn
    } else if holds == expect {
        Status::Pass
    } else {
        Status::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagOut {
    pub file: String,
    pub line: usize,
    pub col: usize,
    pub severity: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: &'static str,
    pub tol: f64,
    pub seed: u64,
    pub exit_code: i32,
    pub items: Vec<Item>,
    pub diagnostics: Vec<DiagOut>,
}

impl Report {
    pub fn new(command: &'static str, tol: f64, seed: u64) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION"),
            command,
            tol,
            seed,
            exit_code: EXIT_OK,
            items: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn error(&mut self, file: &str, line: usize, col: usize, message: String) {
        self.diagnostics.push(DiagOut {
            file: file.to_string(),
            line,
            col,
            severity: "error".into(),
            message,
        });
    }

    /// Errors beat failures, failures beat warnings.
    pub fn finish(&mut self) {
        let any = |s: Status| self.items.iter().any(|i| i.status == s);
        self.exit_code = if !self.diagnostics.is_empty() {
            EXIT_ERROR
        } else if any(Status::Fail) {
            EXIT_FAIL
        } else if any(Status::Warn) {
            EXIT_WARN
        } else {
            EXIT_OK
        };
    }

    pub fn strip_timings(&mut self) {
        for i in &mut self.items {
            i.timings_ms = None;
        }
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let mut file: Option<&str> = None;
        for it in &self.items {
            if it.file.as_deref() != file {
                file = it.file.as_deref();
                if let Some(f) = file {
                    let _ = writeln!(out, "== {f}");
                }
            }
            let verdict = match it.status {
                Status::Pass => "PASS",
                Status::Warn => "WARN",
                Status::Fail => "FAIL",
            };
            let time = it.timings_ms.map(|t| format!("  ({t:.1} ms)")).unwrap_or_default();
            let value = it.value.as_deref().map(|v| format!(" = {v}")).unwrap_or_default();
            let _ = writeln!(out, "{:<44} {verdict}{time}", format!("{} {}{value}", it.kind, it.name));
            for c in &it.conditions {
                let path = match c.path {
                    Path::Direct => "direct",
                    Path::Formula => "formula",
                };
                let st = match c.status {
                    Status::Pass => "pass",
                    Status::Warn => "warn",
                    Status::Fail => "FAIL",
                };
                let _ = writeln!(out, "  {:<42} {path:<8} {st:<5} {:.3e}", c.id, c.margin);
            }
            if it.conditions.is_empty() && !it.margins.is_empty() {
                let ms: Vec<String> = it.margins.iter().map(|m| format!("{m:.3e}")).collect();
                let _ = writeln!(out, "  margin {}", ms.join(" "));
            }
            if !it.ranks.is_empty() {
                let rs: Vec<String> = it.ranks.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "  block ranks {}", rs.join(" "));
            }
            for n in &it.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
        let count = |s: Status| self.items.iter().filter(|i| i.status == s).count();
        let _ = writeln!(
            out,
            "summary: {} pass, {} warn, {} fail, {} errors (tol {:e}, seed {}, exit {})",
            count(Status::Pass),
            count(Status::Warn),
            count(Status::Fail),
            self.diagnostics.len(),
            self.tol,
            self.seed,
            self.exit_code
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let mut r = Report::new("check", 1e-8, 0);
        r.finish();
        let v: serde_json::Value = serde_json::from_str(&r.json()).unwrap();
        assert_eq!(v["items"], serde_json::json!([]));
        assert_eq!(v["exit_code"], 0);
    }

    #[test]
    fn key_order_is_fixed() {
        let mut r = Report::new("eval", 1e-8, 3);
        r.items.push(Item::new(Some("a.qrel"), "f", "formula"));
        let s = r.json();
        let keys = ["\"version\"", "\"command\"", "\"tol\"", "\"seed\"", "\"exit_code\"", "\"items\"", "\"diagnostics\""];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{s}");
    }

    #[test]
    fn truth_verdicts() {
        assert_eq!(judge_truth(0.0, 1e-8, true), Status::Pass);
        assert_eq!(judge_truth(1.0, 1e-8, false), Status::Pass);
        assert_eq!(judge_truth(1.0, 1e-8, true), Status::Fail);
        assert_eq!(judge_truth(1e-7, 1e-8, true), Status::Warn);
        assert_eq!(judge_truth(1e-7, 1e-8, false), Status::Warn);
    }

    #[test]
    fn exit_code_precedence() {
        let mut r = Report::new("verify", 1e-8, 0);
        let mut w = Item::new(None, "a", "assert");
        w.status = Status::Warn;
        r.items.push(w.clone());
        r.finish();
        assert_eq!(r.exit_code, EXIT_WARN);
        w.status = Status::Fail;
        r.items.push(w);
        r.finish();
        assert_eq!(r.exit_code, EXIT_FAIL);
        r.error("a.qrel", 1, 1, "bad".into());
        r.finish();
        assert_eq!(r.exit_code, EXIT_ERROR);
    }
}
