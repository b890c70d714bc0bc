use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use qrel_core::frontend::syntax::SortExpr;
use qrel_core::frontend::{load, parse_sort, AssertItem, Diagnostic, Source, VerifyError, VerifyItem, VerifyKind, Workspace};
use qrel_core::logic::Interpreter;
use qrel_core::selftest::{suite, SUITES};
use qrel_core::structures::Status;
use qrel_core::QSet;

use crate::args::Command;
use crate::report::{judge_truth, Item, Report};

/// Runs one command and returns its report with the exit code filled in.
pub fn run(cmd: &Command) -> Report {
    let common = cmd.common();
    let mut rep = Report::new(cmd.name(), common.tol, common.seed);
    let tol = common.tol;
    match cmd {
        Command::Check { files, .. } => {
            need_files(&mut rep, files);
            for f in files {
                guarded(&mut rep, f, |rep, ws| check(rep, f, ws));
            }
        }
        Command::Eval { files, formula, context, .. } => {
            need_files(&mut rep, files);
            for f in files {
                guarded(&mut rep, f, |rep, ws| eval(rep, f, ws, formula, context.as_deref(), tol));
            }
        }
        Command::Verify { args, kind, names, .. } => match split_verify_args(args, kind.as_deref(), names) {
            Ok((files, target)) => {
                need_files(&mut rep, &files);
                for f in &files {
                    guarded(&mut rep, f, |rep, ws| verify(rep, f, ws, target.as_ref(), tol));
                }
            }
            Err(msg) => rep.error("", 0, 0, msg),
        },
        Command::Selftest { suites, cases, .. } => selftest(&mut rep, suites, *cases),
    }
    rep.finish();
    if common.no_timings {
        rep.strip_timings();
    }
    rep
}

fn need_files(rep: &mut Report, files: &[String]) {
    if files.is_empty() {
        rep.error("", 0, 0, "no input files".into());
    }
}

/// Loads `file` and runs `body` on it; diagnostics and panics become errors.
fn guarded(rep: &mut Report, file: &str, body: impl FnOnce(&mut Report, &Workspace)) {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            rep.error(file, 0, 0, format!("cannot read file: {e}"));
            return;
        }
    };
    let loaded = catch_unwind(|| load(&text));
    let ws = match loaded {
        Ok(Ok((_, ws))) => ws,
        Ok(Err(ds)) => {
            push_diags(rep, file, &ds);
            return;
        }
        Err(p) => {
            rep.error(file, 0, 0, format!("internal error while loading: {}", panic_text(&p)));
            return;
        }
    };
    let before = rep.items.len();
    if let Err(p) = catch_unwind(AssertUnwindSafe(|| body(rep, &ws))) {
        rep.items.truncate(before);
        rep.error(file, 0, 0, format!("internal error: {}", panic_text(&p)));
    }
}

fn panic_text(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

fn push_diags(rep: &mut Report, file: &str, ds: &[Diagnostic]) {
    let mut ds: Vec<&Diagnostic> = ds.iter().collect();
    ds.sort_by_key(|d| (d.span.start, d.span.end));
    for d in ds {
        let mut message = d.message.clone();
        if let Some(h) = &d.hint {
            message.push_str(&format!(" (hint: {h})"));
        }
        rep.diagnostics.push(crate::report::DiagOut {
            file: file.to_string(),
            line: d.start.line,
            col: d.start.col,
            severity: d.severity.to_string(),
            message,
        });
    }
}

fn ms(t: Instant) -> Option<f64> {
    Some((t.elapsed().as_secs_f64() * 1e6).round() / 1e3)
}

fn check(rep: &mut Report, file: &str, ws: &Workspace) {
    let mut it = Item::new(Some(file), file, "check");
    it.passed = Some(true);
    it.notes.push(format!(
        "{} sets, {} symbols, {} formulas, {} asserts, {} verify directives",
        ws.qsets.len(),
        ws.env.rel_names().count() + ws.env.fn_names().count(),
        ws.formulas.len(),
        ws.asserts.len(),
        ws.verifies.len()
    ));
    rep.items.push(it);
}

fn resolve_sort(ws: &Workspace, s: &SortExpr) -> Result<QSet, String> {
    Ok(match s {
        SortExpr::Name(i) => ws.qsets.get(&i.name).cloned().ok_or_else(|| format!("unknown sort `{}`", i.name))?,
        SortExpr::Unit(_) => QSet::unit(),
        SortExpr::Dual(inner, _) => resolve_sort(ws, inner)?.dual(),
        SortExpr::Product(a, b) => resolve_sort(ws, a)?.product(&resolve_sort(ws, b)?),
    })
}

/// Parses "x:X,y:Y*" against the workspace's sorts.
fn parse_context(ws: &Workspace, spec: &str) -> Result<Vec<(String, QSet)>, String> {
    let mut out: Vec<(String, QSet)> = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (v, s) = part
            .split_once(':')
            .ok_or_else(|| format!("context entry `{part}` should read `name:sort`"))?;
        let v = v.trim();
        if v.is_empty() || !v.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(format!("`{v}` is not a variable name"));
        }
        if out.iter().any(|(w, _)| w == v) {
            return Err(format!("variable `{v}` appears twice in the context"));
        }
        let expr = parse_sort(&Source::new(s.trim())).map_err(|ds| {
            let m: Vec<String> = ds.iter().map(|d| d.message.clone()).collect();
            format!("bad sort `{}` for `{v}`: {}", s.trim(), m.join("; "))
        })?;
        out.push((v.to_string(), resolve_sort(ws, &expr)?));
    }
    Ok(out)
}

fn eval(rep: &mut Report, file: &str, ws: &Workspace, name: &str, context: Option<&str>, tol: f64) {
    let Some(nf) = ws.formula(name) else {
        rep.error(file, 0, 0, format!("unknown formula `{name}`"));
        return;
    };
    let ctx = match context {
        Some(spec) => match parse_context(ws, spec) {
            Ok(c) => c,
            Err(m) => {
                rep.error(file, nf.line, 1, m);
                return;
            }
        },
        None => nf.context.clone(),
    };
    let t = Instant::now();
    let r = match Interpreter::new(&ws.env).interpret(&nf.formula, &ctx) {
        Ok(r) => r,
        Err(e) => {
            rep.error(file, nf.line, 1, e.to_string());
            return;
        }
    };
    let mut it = Item::new(Some(file), name, "formula");
    let names: Vec<String> = ctx.iter().map(|(v, s)| format!("{v}:{s}")).collect();
    it.notes.push(format!("context [{}]", names.join(", ")));
    it.ranks = (0..r.dom().num_atoms()).map(|i| r.block(i, 0).rank()).collect();
    if ctx.is_empty() {
        let u = QSet::unit();
        let margin = r.distance(&qrel_core::Relation::top(&u, &u)).unwrap_or(f64::INFINITY);
        it.status = judge_truth(margin, tol, margin <= tol);
        it.value = Some((margin <= tol).to_string());
        it.margins.push(margin);
    }
    it.timings_ms = ms(t);
    rep.items.push(it);
}

/// A verify request named on the command line.
struct Request {
    kind: VerifyKind,
    names: Vec<String>,
}

fn split_verify_args(args: &[String], kind: Option<&str>, names: &[String]) -> Result<(Vec<String>, Option<Request>), String> {
    let is_file = |a: &str| a.ends_with(".qrel") || Path::new(a).is_file();
    let files: Vec<String> = args.iter().filter(|a| is_file(a)).cloned().collect();
    let mut rest: Vec<String> = args.iter().filter(|a| !is_file(a)).cloned().collect();
    let kind = match kind {
        Some(k) => Some(k.to_string()),
        None if !rest.is_empty() => Some(rest.remove(0)),
        None => None,
    };
    rest.extend(names.iter().cloned());
    let Some(k) = kind else {
        return Ok((files, None));
    };
    let kind = VerifyKind::parse(&k).ok_or_else(|| {
        let all: Vec<&str> = VerifyKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown structure kind `{k}`; expected one of {}", all.join(", "))
    })?;
    if rest.is_empty() {
        return Err(format!("`{}` needs the names of the objects to check", kind.name()));
    }
    Ok((files, Some(Request { kind, names: rest })))
}

fn verify_one(rep: &mut Report, file: &str, ws: &Workspace, kind: VerifyKind, names: &[String], line: usize, tol: f64) {
    let t = Instant::now();
    match ws.verify(kind, names) {
        Ok(mut r) => {
            r.rejudge(tol);
            let mut it = Item::from_report(file, &names.join(" "), &r);
            it.timings_ms = ms(t);
            rep.items.push(it);
        }
        Err(VerifyError::Target(e)) => rep.error(file, line, 1, e.message),
        Err(VerifyError::Structure(e)) => rep.error(file, line, 1, e.to_string()),
    }
}

fn verify(rep: &mut Report, file: &str, ws: &Workspace, req: Option<&Request>, tol: f64) {
    if let Some(r) = req {
        verify_one(rep, file, ws, r.kind, &r.names, 0, tol);
        return;
    }
    let mut steps: Vec<(usize, Option<&AssertItem>, Option<&VerifyItem>)> = Vec::new();
    steps.extend(ws.asserts.iter().map(|a| (a.line, Some(a), None)));
    steps.extend(ws.verifies.iter().map(|v| (v.line, None, Some(v))));
    steps.sort_by_key(|s| s.0);
    for step in steps {
        match step {
            (_, Some(a), _) => assert_one(rep, file, ws, a, tol),
            (_, _, Some(v)) => verify_one(rep, file, ws, v.kind, &v.names, v.line, tol),
            _ => {}
        }
    }
}

fn assert_one(rep: &mut Report, file: &str, ws: &Workspace, a: &AssertItem, tol: f64) {
    let Some(nf) = ws.formula(&a.formula) else { return };
    let t = Instant::now();
    match Interpreter::new(&ws.env).truth_margin(&nf.formula) {
        Ok(m) => {
            let mut it = Item::new(Some(file), &a.formula, "assert");
            it.status = judge_truth(m, tol, a.expect);
            it.passed = Some(it.status == Status::Pass);
            it.value = Some((m <= tol).to_string());
            it.margins.push(m);
            it.notes.push(format!("expected {}", a.expect));
            it.timings_ms = ms(t);
            rep.items.push(it);
        }
        Err(e) => rep.error(file, a.line, 1, e.to_string()),
    }
}

fn selftest(rep: &mut Report, names: &[String], cases: Option<usize>) {
    let chosen: Vec<_> = if names.is_empty() {
        SUITES.iter().collect()
    } else {
        let mut v = Vec::new();
        for n in names {
            match suite(n) {
                Some(s) => v.push(s),
                None => {
                    let all: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
                    rep.error("", 0, 0, format!("unknown suite `{n}`; expected one of {}", all.join(", ")));
                    return;
                }
            }
        }
        v
    };
    for s in chosen {
        let r = (s.run)(rep.seed, cases.unwrap_or(s.default_cases));
        let mut it = Item::new(None, s.name, "suite");
        it.passed = Some(r.passed());
        it.status = if r.passed() { Status::Pass } else { Status::Fail };
        it.margins.push(r.max_margin);
        it.notes.push(format!("{} cases, {} checks, {} failures, tolerance {:e}", r.cases, r.checks, r.failures, r.tol));
        it.notes.extend(r.examples.iter().cloned());
        it.timings_ms = Some((r.seconds * 1e6).round() / 1e3);
        rep.items.push(it);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_arguments() {
        let a = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let (f, r) = split_verify_args(&a(&["magic-unitary", "P", "x.qrel"]), None, &[]).unwrap();
        assert_eq!(f, ["x.qrel"]);
        let r = r.unwrap();
        assert_eq!((r.kind, r.names), (VerifyKind::MagicUnitary, a(&["P"])));
        let (_, r) = split_verify_args(&a(&["x.qrel"]), Some("graph"), &a(&["R"])).unwrap();
        assert_eq!(r.unwrap().names, ["R"]);
        assert!(split_verify_args(&a(&["x.qrel"]), None, &[]).unwrap().1.is_none());
        assert!(split_verify_args(&a(&["bogus", "R", "x.qrel"]), None, &[]).is_err());
        assert!(split_verify_args(&a(&["graph", "x.qrel"]), None, &[]).is_err());
    }

    #[test]
    fn context_spec() {
        let (_, ws) = load("qset X { atoms = [2] }\nqset Y { classical = [\"a\"] }").unwrap();
        let c = parse_context(&ws, "x:X, y:Y*").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].1, ws.qsets["Y"].dual());
        assert!(parse_context(&ws, "x:Z").is_err());
        assert!(parse_context(&ws, "x X").is_err());
        assert!(parse_context(&ws, "x:X,x:X").is_err());
        assert!(parse_context(&ws, "x:(X").is_err());
    }
}
