//! Reduction of nonduplicating formulas to primitive ones (¬, ∧, ∀, atoms over variables).
//!
//! Used as an oracle for the direct interpreter.

use super::ast::{Formula, Pred, Term};
use super::env::Env;
use super::LogicError;
use crate::qset::QSet;

struct Fresh(usize);

impl Fresh {
    fn next(&mut self) -> String {
        let v = format!("${}", self.0);
        self.0 += 1;
        v
    }
}

fn not(f: Formula) -> Formula {
    Formula::not(f)
}

fn and(a: Formula, b: Formula) -> Formula {
    Formula::and(a, b)
}

/// `¬P ∨ (P ∧ Q)` with `∨` written through `¬` and `∧`.
fn arrow(p: Formula, q: Formula) -> Formula {
    or(not(p.clone()), and(p, q))
}

fn or(a: Formula, b: Formula) -> Formula {
    not(and(not(a), not(b)))
}

fn forall(v: &str, s: &QSet, body: Formula) -> Formula {
    Formula::forall(v, s, body)
}

/// `∀(x=x*) φ` as `∀x* ∀x (E(x,x*) → φ)`.
fn forall_diag(x: &str, xs: &str, s: &QSet, body: Formula) -> Formula {
    let e = Formula::eq(s, Term::var(x), Term::var(xs));
    forall(xs, &s.dual(), forall(x, s, arrow(e, body)))
}

/// Translates `f` into an equivalent primitive formula with the same free variables.
pub fn translate(f: &Formula, env: &Env) -> Result<Formula, LogicError> {
    let mut fresh = Fresh(0);
    go(f, env, &mut fresh)
}

fn go(f: &Formula, env: &Env, fresh: &mut Fresh) -> Result<Formula, LogicError> {
    Ok(match f {
        Formula::Top | Formula::Bottom => f.clone(),
        Formula::Atomic { pred, conj, args } => {
            if args.iter().all(Term::is_var) {
                f.clone()
            } else {
                atomic(pred, *conj, args, env, fresh)?
            }
        }
        Formula::Not(a) => not(go(a, env, fresh)?),
        Formula::And(a, b) => and(go(a, env, fresh)?, go(b, env, fresh)?),
        Formula::Or(a, b) => or(go(a, env, fresh)?, go(b, env, fresh)?),
        Formula::Implies(a, b) => arrow(go(a, env, fresh)?, go(b, env, fresh)?),
        Formula::Sasaki(a, b) => {
            let (p, q) = (go(a, env, fresh)?, go(b, env, fresh)?);
            and(or(p, not(q.clone())), q)
        }
        Formula::Iff(a, b) => {
            let (p, q) = (go(a, env, fresh)?, go(b, env, fresh)?);
            and(arrow(p.clone(), q.clone()), arrow(q, p))
        }
        Formula::Forall { var, sort, body } => forall(var, sort, go(body, env, fresh)?),
        Formula::Exists { var, sort, body } => not(forall(var, sort, not(go(body, env, fresh)?))),
        Formula::ForallDiag { var, dvar, sort, body } => {
            forall_diag(var, dvar, sort, go(body, env, fresh)?)
        }
        Formula::ExistsDiag { var, dvar, sort, body } => {
            not(forall_diag(var, dvar, sort, not(go(body, env, fresh)?)))
        }
    })
}

/// Sort of each argument position of a predicate.
fn pred_sorts(pred: &Pred, conj: bool, env: &Env) -> Result<Vec<QSet>, LogicError> {
    let sorts = match pred {
        Pred::Named(n) => env.pred(n, false)?.sorts,
        Pred::Eq(x) => vec![x.clone(), x.dual()],
    };
    Ok(if conj {
        sorts.iter().map(QSet::dual).collect()
    } else {
        sorts
    })
}

/// `R(t_1..t_n)` becomes
/// `∃(y_n=y_n*)..∃(y_1=y_1*) (R(y_1..y_n) ∧ t_1 ↷ y_1* ∧ .. ∧ t_n ↷ y_n*)`.
fn atomic(pred: &Pred, conj: bool, args: &[Term], env: &Env, fresh: &mut Fresh) -> Result<Formula, LogicError> {
    let sorts = pred_sorts(pred, conj, env)?;
    if sorts.len() != args.len() {
        return Err(LogicError::Sort(format!(
            "predicate arity {} given {} arguments",
            sorts.len(),
            args.len()
        )));
    }
    let pairs: Vec<(String, String)> = args.iter().map(|_| (fresh.next(), fresh.next())).collect();
    let mut body = Formula::Atomic {
        pred: pred.clone(),
        conj,
        args: pairs.iter().map(|(y, _)| Term::var(y)).collect(),
    };
    for ((a, (_, ys)), s) in args.iter().zip(&pairs).zip(&sorts) {
        body = and(body, arrives(a, ys, s, env, fresh)?);
    }
    // the quantifiers are themselves defined; expand them after the body
    let mut out = body;
    for ((y, ys), s) in pairs.iter().zip(&sorts) {
        out = not(forall_diag(y, ys, s, not(out)));
    }
    Ok(out)
}

/// `t ↷ y*`: `E(t, y*)` for a variable, `G(s.., y*)` for `t = Ğ(s..)`.
fn arrives(t: &Term, ys: &str, sort: &QSet, env: &Env, fresh: &mut Fresh) -> Result<Formula, LogicError> {
    let f = match t {
        Term::Var(_) => Formula::eq(sort, t.clone(), Term::var(ys)),
        Term::App { head, conj, args } => {
            let mut a = args.clone();
            a.push(Term::var(ys));
            Formula::Atomic {
                pred: Pred::Named(head.clone()),
                conj: *conj,
                args: a,
            }
        }
    };
    go(&f, env, fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Interpreter;
    use crate::relation::Relation;

    #[test]
    fn primitive_is_fixed() {
        let env = Env::new();
        let x = QSet::from_dims("X", &[2]).unwrap();
        let f = forall("x", &x, not(Formula::rel("R", &["x"])));
        assert_eq!(translate(&f, &env).unwrap(), f);
    }

    #[test]
    fn exists_becomes_not_forall_not() {
        let env = Env::new();
        let x = QSet::from_dims("X", &[2]).unwrap();
        let f = Formula::exists("x", &x, Formula::rel("R", &["x"]));
        let want = not(forall("x", &x, not(Formula::rel("R", &["x"]))));
        assert_eq!(translate(&f, &env).unwrap(), want);
    }

    #[test]
    fn unbent_term_translation_agrees() {
        let x = QSet::from_dims("X", &[2]).unwrap();
        let y = QSet::classical("Y", &["a", "b"]).unwrap();
        let u = QSet::unit();
        let mut env = Env::new();
        let g = Relation::top(&x, &y).meet(&Relation::top(&x, &y)).unwrap();
        let graph = Relation::equality(&y).compose(&g.cross(&Relation::identity(&y.dual()))).unwrap();
        env.add_rel("G", vec![x.clone(), y.dual()], graph).unwrap();
        let p = Relation::from_blocks(&y, &u, vec![(0, 0, crate::Subspace::full(1, 1))]).unwrap();
        env.add_rel("P", vec![y.clone()], p).unwrap();
        let f = Formula::atom("P", vec![Term::app("G", vec![Term::var("x")])]);
        let t = translate(&f, &env).unwrap();
        assert!(t.is_primitive());
        assert_eq!(t.free_vars(), vec!["x".to_string()]);
        let it = Interpreter::new(&env);
        let ctx = vec![("x".to_string(), x)];
        let a = it.interpret(&f, &ctx).unwrap();
        let b = it.interpret(&t, &ctx).unwrap();
        assert!(a.approx_eq(&b));
    }
}
