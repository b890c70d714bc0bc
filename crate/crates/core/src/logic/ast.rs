//! Terms and formulas of nonduplicating first-order logic over quantum sets.

use std::fmt;

use crate::qset::QSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    /// `head(args)`; `conj` applies the conjugate of the head symbol.
    App {
        head: String,
        conj: bool,
        args: Vec<Term>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pred {
    /// A declared relation, or the graph of a declared function.
    Named(String),
    /// The equality predicate E_X of arity (X, X*).
    Eq(QSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Top,
    Bottom,
    Atomic {
        pred: Pred,
        conj: bool,
        args: Vec<Term>,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// Sasaki projection `(P ∨ ¬Q) ∧ Q`.
    Sasaki(Box<Formula>, Box<Formula>),
    Forall {
        var: String,
        sort: QSet,
        body: Box<Formula>,
    },
    Exists {
        var: String,
        sort: QSet,
        body: Box<Formula>,
    },
    /// Quantifier over the diagonal; `dvar` ranges over the dual sort.
    ForallDiag {
        var: String,
        dvar: String,
        sort: QSet,
        body: Box<Formula>,
    },
    ExistsDiag {
        var: String,
        dvar: String,
        sort: QSet,
        body: Box<Formula>,
    },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(head: &str, args: Vec<Term>) -> Term {
        Term::App {
            head: head.to_string(),
            conj: false,
            args,
        }
    }

    pub fn conj_app(head: &str, args: Vec<Term>) -> Term {
        Term::App {
            head: head.to_string(),
            conj: true,
            args,
        }
    }

    /// Variables in order of appearance, repetitions kept.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl Formula {
    pub fn atom(name: &str, args: Vec<Term>) -> Formula {
        Formula::Atomic {
            pred: Pred::Named(name.to_string()),
            conj: false,
            args,
        }
    }

    pub fn conj_atom(name: &str, args: Vec<Term>) -> Formula {
        Formula::Atomic {
            pred: Pred::Named(name.to_string()),
            conj: true,
            args,
        }
    }

    pub fn eq(sort: &QSet, a: Term, b: Term) -> Formula {
        Formula::Atomic {
            pred: Pred::Eq(sort.clone()),
            conj: false,
            args: vec![a, b],
        }
    }

    /// Atomic formula whose arguments are all variables.
    pub fn rel(name: &str, vars: &[&str]) -> Formula {
        Self::atom(name, vars.iter().map(|v| Term::var(v)).collect())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn sasaki(a: Formula, b: Formula) -> Formula {
        Formula::Sasaki(Box::new(a), Box::new(b))
    }

    pub fn forall(var: &str, sort: &QSet, body: Formula) -> Formula {
        Formula::Forall {
            var: var.to_string(),
            sort: sort.clone(),
            body: Box::new(body),
        }
    }

    pub fn exists(var: &str, sort: &QSet, body: Formula) -> Formula {
        Formula::Exists {
            var: var.to_string(),
            sort: sort.clone(),
            body: Box::new(body),
        }
    }

    pub fn forall_diag(var: &str, dvar: &str, sort: &QSet, body: Formula) -> Formula {
        Formula::ForallDiag {
            var: var.to_string(),
            dvar: dvar.to_string(),
            sort: sort.clone(),
            body: Box::new(body),
        }
    }

    pub fn exists_diag(var: &str, dvar: &str, sort: &QSet, body: Formula) -> Formula {
        Formula::ExistsDiag {
            var: var.to_string(),
            dvar: dvar.to_string(),
            sort: sort.clone(),
            body: Box::new(body),
        }
    }

    /// Free variables in order of first appearance.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atomic { args, .. } => {
                for a in args {
                    for v in a.vars() {
                        if !bound.iter().any(|b| b == v) && !out.iter().any(|o| o == v) {
                            out.push(v.to_string());
                        }
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) | Formula::Sasaki(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall { var, body, .. } | Formula::Exists { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::ForallDiag { var, dvar, body, .. }
            | Formula::ExistsDiag { var, dvar, body, .. } => {
                bound.push(var.clone());
                bound.push(dvar.clone());
                body.collect_free(bound, out);
                bound.pop();
                bound.pop();
            }
        }
    }

    /// Number of nested connectives and quantifiers above the atoms.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atomic { .. } => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) | Formula::Sasaki(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Forall { body, .. }
            | Formula::Exists { body, .. }
            | Formula::ForallDiag { body, .. }
            | Formula::ExistsDiag { body, .. } => 1 + body.depth(),
        }
    }

    /// Primitive formulas use only ¬, ∧, ∀ and atoms over distinct variables.
    pub fn is_primitive(&self) -> bool {
        match self {
            Formula::Top | Formula::Bottom => true,
            Formula::Atomic { args, .. } => args.iter().all(Term::is_var),
            Formula::Not(a) => a.is_primitive(),
            Formula::And(a, b) => a.is_primitive() && b.is_primitive(),
            Formula::Forall { body, .. } => body.is_primitive(),
            _ => false,
        }
    }
}

/// A variable occurring twice inside one atomic subformula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Duplication {
    pub var: String,
    /// Route from the root, e.g. `and.1/forall/atom`.
    pub path: String,
    pub atomic: String,
}

impl fmt::Display for Duplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "variable `{}` occurs more than once in atomic formula {} (at {})",
            self.var, self.atomic, self.path
        )
    }
}

/// Checks that no atomic subformula mentions a variable twice.
pub fn nondup_check(f: &Formula) -> Result<(), Duplication> {
    fn go(f: &Formula, path: &mut Vec<String>) -> Result<(), Duplication> {
        match f {
            Formula::Top | Formula::Bottom => Ok(()),
            Formula::Atomic { args, .. } => {
                let mut seen: Vec<&str> = Vec::new();
                for a in args {
                    for v in a.vars() {
                        if seen.contains(&v) {
                            path.push("atom".into());
                            let p = path.join("/");
                            path.pop();
                            return Err(Duplication {
                                var: v.to_string(),
                                path: p,
                                atomic: f.to_string(),
                            });
                        }
                        seen.push(v);
                    }
                }
                Ok(())
            }
            Formula::Not(a) => {
                path.push("not".into());
                go(a, path)?;
                path.pop();
                Ok(())
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) | Formula::Sasaki(a, b) => {
                let tag = match f {
                    Formula::And(..) => "and",
                    Formula::Or(..) => "or",
                    Formula::Implies(..) => "implies",
                    Formula::Sasaki(..) => "sasaki",
                    _ => "iff",
                };
                for (k, c) in [a, b].into_iter().enumerate() {
                    path.push(format!("{tag}.{k}"));
                    go(c, path)?;
                    path.pop();
                }
                Ok(())
            }
            Formula::Forall { body, .. }
            | Formula::Exists { body, .. }
            | Formula::ForallDiag { body, .. }
            | Formula::ExistsDiag { body, .. } => {
                path.push("quant".into());
                go(body, path)?;
                path.pop();
                Ok(())
            }
        }
    }
    go(f, &mut Vec::new())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App { head, conj, args } => {
                if *conj {
                    write!(f, "~")?;
                }
                write!(f, "{head}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (k, a) in args.iter().enumerate() {
                        if k > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

fn sort_text(s: &QSet) -> String {
    let t = s.to_string();
    if t.contains(' ') {
        format!("({t})")
    } else {
        t
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => write!(f, "true"),
            Formula::Bottom => write!(f, "false"),
            Formula::Atomic { pred, conj, args } => {
                if *conj {
                    write!(f, "~")?;
                }
                match pred {
                    Pred::Named(n) => write!(f, "{n}")?,
                    Pred::Eq(s) => write!(f, "E[{}]", s)?,
                }
                write!(f, "(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Not(a) => write!(f, "not {}", Paren(a)),
            Formula::And(a, b) => write!(f, "{} and {}", Paren(a), Paren(b)),
            Formula::Or(a, b) => write!(f, "{} or {}", Paren(a), Paren(b)),
            Formula::Implies(a, b) => write!(f, "{} -> {}", Paren(a), Paren(b)),
            Formula::Iff(a, b) => write!(f, "{} <-> {}", Paren(a), Paren(b)),
            Formula::Sasaki(a, b) => write!(f, "{} & {}", Paren(a), Paren(b)),
            Formula::Forall { var, sort, body } => {
                write!(f, "forall {var} in {} . {body}", sort_text(sort))
            }
            Formula::Exists { var, sort, body } => {
                write!(f, "exists {var} in {} . {body}", sort_text(sort))
            }
            Formula::ForallDiag { var, dvar, sort, body } => {
                write!(f, "forall {var} == {dvar} in {} . {body}", sort_text(sort))
            }
            Formula::ExistsDiag { var, dvar, sort, body } => {
                write!(f, "exists {var} == {dvar} in {} . {body}", sort_text(sort))
            }
        }
    }
}

/// Wraps non-atomic subformulas in parentheses.
struct Paren<'a>(&'a Formula);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Top | Formula::Bottom | Formula::Atomic { .. } => write!(f, "{}", self.0),
            other => write!(f, "({other})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nondup_examples() {
        assert!(nondup_check(&Formula::rel("R", &["x", "y"])).is_ok());
        let bad = nondup_check(&Formula::rel("R", &["x", "x"])).unwrap_err();
        assert_eq!(bad.var, "x");
        let ok = Formula::and(Formula::rel("R", &["x", "y"]), Formula::rel("S", &["x", "z"]));
        assert!(nondup_check(&ok).is_ok());
        let nested = Formula::atom("P", vec![Term::app("F", vec![Term::var("x"), Term::var("x")])]);
        assert!(nondup_check(&nested).is_err());
    }

    #[test]
    fn free_vars_and_display() {
        let x = QSet::from_dims("X", &[2]).unwrap();
        let f = Formula::forall("x", &x, Formula::rel("R", &["x", "y"]));
        assert_eq!(f.free_vars(), vec!["y".to_string()]);
        assert_eq!(f.to_string(), "forall x in X . R(x, y)");
        let g = Formula::forall_diag("x", "xs", &x, Formula::rel("R", &["x", "xs"]));
        assert!(g.free_vars().is_empty());
        assert!(!g.is_primitive());
        assert!(f.is_primitive());
    }
}
