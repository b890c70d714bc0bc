//! Semantics: formulas in a context become relations of the context's arity.

use super::ast::{nondup_check, Formula, Pred, Term};
use super::env::{conjugate_pred, Env};
use super::LogicError;
use crate::qset::QSet;
use crate::relation::Relation;
use crate::Subspace;

/// An ordered list of typed variables.
pub type Context = Vec<(String, QSet)>;

/// How universal quantifiers are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForallMode {
    /// `¬∃¬`, one composition and two complements.
    #[default]
    Dual,
    /// Supremum of relations below the body, via residual factors.
    Residual,
}

pub struct Interpreter<'a> {
    env: &'a Env,
    pub forall_mode: ForallMode,
}

fn sorts_of(ctx: &[(String, QSet)]) -> Vec<QSet> {
    ctx.iter().map(|(_, s)| s.clone()).collect()
}

fn sort_err(what: &str, expected: &QSet, found: &QSet) -> LogicError {
    LogicError::Sort(format!("{what}: expected sort {expected}, found {found}"))
}

impl<'a> Interpreter<'a> {
    pub fn new(env: &'a Env) -> Self {
        Interpreter {
            env,
            forall_mode: ForallMode::Dual,
        }
    }

    pub fn with_mode(env: &'a Env, forall_mode: ForallMode) -> Self {
        Interpreter { env, forall_mode }
    }

    pub fn env(&self) -> &Env {
        self.env
    }

    /// Interprets `f` in `ctx`, which must contain every free variable.
    pub fn interpret(&self, f: &Formula, ctx: &[(String, QSet)]) -> Result<Relation, LogicError> {
        for (k, (v, _)) in ctx.iter().enumerate() {
            if ctx[..k].iter().any(|(w, _)| w == v) {
                return Err(LogicError::DuplicateContextVariable(v.clone()));
            }
        }
        for v in f.free_vars() {
            if !ctx.iter().any(|(w, _)| *w == v) {
                return Err(LogicError::FreeVariableNotInContext(v));
            }
        }
        nondup_check(f).map_err(LogicError::Duplication)?;
        self.eval(f, ctx)
    }

    /// Truth of a sentence: its interpretation equals ⊤ on the unit set.
    pub fn truth(&self, f: &Formula) -> Result<bool, LogicError> {
        Ok(self.truth_margin(f)? <= 1e-8)
    }

    /// Projector distance of the sentence's interpretation from ⊤.
    pub fn truth_margin(&self, f: &Formula) -> Result<f64, LogicError> {
        let free = f.free_vars();
        if !free.is_empty() {
            return Err(LogicError::HasFreeVariables(free));
        }
        let r = self.interpret(f, &[])?;
        let u = QSet::unit();
        Ok(r.distance(&Relation::top(&u, &u))?)
    }

    fn eval(&self, f: &Formula, ctx: &[(String, QSet)]) -> Result<Relation, LogicError> {
        let dom = QSet::product_all(&sorts_of(ctx));
        let unit = QSet::unit();
        Ok(match f {
            Formula::Top => Relation::top(&dom, &unit),
            Formula::Bottom => Relation::bottom(&dom, &unit),
            Formula::Atomic { pred, conj, args } => self.atomic(pred, *conj, args, ctx)?,
            Formula::Not(a) => self.eval(a, ctx)?.neg(),
            Formula::And(a, b) => self.eval(a, ctx)?.meet(&self.eval(b, ctx)?)?,
            Formula::Or(a, b) => self.eval(a, ctx)?.join(&self.eval(b, ctx)?)?,
            Formula::Implies(a, b) => self.eval(a, ctx)?.sasaki_arrow(&self.eval(b, ctx)?)?,
            Formula::Sasaki(a, b) => self.eval(a, ctx)?.sasaki_and(&self.eval(b, ctx)?)?,
            Formula::Iff(a, b) => {
                let (p, q) = (self.eval(a, ctx)?, self.eval(b, ctx)?);
                p.sasaki_arrow(&q)?.meet(&q.sasaki_arrow(&p)?)?
            }
            Formula::Exists { var, sort, body } => {
                let inner = self.extend(ctx, &[(var, sort.clone())])?;
                self.exists(&self.eval(body, &inner)?, sort, ctx)?
            }
            Formula::Forall { var, sort, body } => {
                let inner = self.extend(ctx, &[(var, sort.clone())])?;
                match self.forall_mode {
                    ForallMode::Dual => {
                        self.exists(&self.eval(body, &inner)?.neg(), sort, ctx)?.neg()
                    }
                    ForallMode::Residual => {
                        forall_residual(&self.eval(body, &inner)?, &sorts_of(&inner), 1)?
                    }
                }
            }
            Formula::ExistsDiag { var, dvar, sort, body } => {
                let inner = self.extend(ctx, &[(var, sort.clone()), (dvar, sort.dual())])?;
                self.exists_diag(&self.eval(body, &inner)?, sort, ctx)?
            }
            Formula::ForallDiag { var, dvar, sort, body } => {
                let inner = self.extend(ctx, &[(var, sort.clone()), (dvar, sort.dual())])?;
                let s = self.eval(body, &inner)?;
                match self.forall_mode {
                    ForallMode::Dual => self.exists_diag(&s.neg(), sort, ctx)?.neg(),
                    ForallMode::Residual => {
                        let rest = QSet::product_all(&sorts_of(ctx));
                        residual(&s, &Relation::equality(sort), &rest)?
                    }
                }
            }
        })
    }

    fn extend(&self, ctx: &[(String, QSet)], new: &[(&String, QSet)]) -> Result<Context, LogicError> {
        let mut out: Context = Vec::with_capacity(ctx.len() + new.len());
        for (v, s) in new {
            if ctx.iter().any(|(w, _)| w == *v) || out.iter().any(|(w, _)| w == *v) {
                return Err(LogicError::Rebinding((*v).clone()));
            }
            out.push(((*v).clone(), s.clone()));
        }
        out.extend(ctx.iter().cloned());
        Ok(out)
    }

    /// `S ∘ (⊤†_X × I)` for `S` of arity (X, ctx..).
    fn exists(&self, s: &Relation, sort: &QSet, ctx: &[(String, QSet)]) -> Result<Relation, LogicError> {
        let cols: Vec<Subspace> = (0..sort.num_atoms()).map(|x| Subspace::full(sort.dim(x), 1)).collect();
        lift_compose(s, sort.num_atoms(), &cols, ctx)
    }

    /// `S ∘ (E_X† × I)` for `S` of arity (X, X*, ctx..).
    fn exists_diag(&self, s: &Relation, sort: &QSet, ctx: &[(String, QSet)]) -> Result<Relation, LogicError> {
        let cap = Relation::equality(sort).dagger();
        let cols: Vec<Subspace> = (0..cap.cod().num_atoms()).map(|p| cap.block(0, p).clone()).collect();
        lift_compose(s, cols.len(), &cols, ctx)
    }

    fn atomic(
        &self,
        pred: &Pred,
        conj: bool,
        args: &[Term],
        ctx: &[(String, QSet)],
    ) -> Result<Relation, LogicError> {
        let info = match pred {
            Pred::Named(n) => self.env.pred(n, conj)?,
            Pred::Eq(x) => conjugate_pred(vec![x.clone(), x.dual()], Relation::equality(x), conj),
        };
        if info.sorts.len() != args.len() {
            return Err(LogicError::Sort(format!(
                "predicate {} has arity {}, given {} arguments",
                pred_name(pred),
                info.sorts.len(),
                args.len()
            )));
        }
        let mut vars: Context = Vec::new();
        let mut cores = Vec::with_capacity(args.len());
        let mut all_vars = true;
        for (a, want) in args.iter().zip(&info.sorts) {
            let (core, vs, sort) = self.term_core(a, ctx)?;
            if &sort != want {
                return Err(sort_err(&format!("argument `{a}` of {}", pred_name(pred)), want, &sort));
            }
            all_vars &= a.is_var();
            cores.push(core);
            vars.extend(vs);
        }
        let q = if all_vars {
            info.rel
        } else {
            info.rel.compose(&Relation::cross_all(&cores))?
        };
        place(&q, &vars, ctx)
    }

    /// A term as a function from its own variables (in order of appearance).
    fn term_core(&self, t: &Term, ctx: &[(String, QSet)]) -> Result<(Relation, Context, QSet), LogicError> {
        match t {
            Term::Var(v) => {
                let sort = ctx
                    .iter()
                    .find(|(w, _)| w == v)
                    .map(|(_, s)| s.clone())
                    .ok_or_else(|| LogicError::FreeVariableNotInContext(v.clone()))?;
                Ok((Relation::identity(&sort), vec![(v.clone(), sort.clone())], sort))
            }
            Term::App { head, conj, args } => {
                let h = self.env.head(head, args.len(), *conj)?;
                let mut vars = Vec::new();
                let mut cores = Vec::with_capacity(args.len());
                let mut all_vars = true;
                for (a, want) in args.iter().zip(&h.args) {
                    let (core, vs, sort) = self.term_core(a, ctx)?;
                    if &sort != want {
                        return Err(sort_err(&format!("argument `{a}` of `{head}`"), want, &sort));
                    }
                    all_vars &= a.is_var();
                    cores.push(core);
                    vars.extend(vs);
                }
                for (k, (v, _)) in vars.iter().enumerate() {
                    if vars[..k].iter().any(|(w, _)| w == v) {
                        return Err(LogicError::Duplication(super::ast::Duplication {
                            var: v.clone(),
                            path: "term".into(),
                            atomic: t.to_string(),
                        }));
                    }
                }
                let rel = if all_vars {
                    h.rel
                } else {
                    h.rel.compose(&Relation::cross_all(&cores))?
                };
                Ok((rel, vars, h.cod))
            }
        }
    }

    /// The function `ctx -> sort(t)` denoted by a term.
    pub fn interpret_term(&self, t: &Term, ctx: &[(String, QSet)]) -> Result<Relation, LogicError> {
        let (core, vars, _) = self.term_core(t, ctx)?;
        let sorts = sorts_of(ctx);
        let pi = extension(&vars, ctx)?;
        let used: Vec<QSet> = vars.iter().map(|(_, s)| s.clone()).collect();
        let unused: Vec<QSet> = pi[vars.len()..].iter().map(|&k| sorts[k].clone()).collect();
        let proj = Relation::identity(&QSet::product_all(&used))
            .cross(&Relation::top(&QSet::product_all(&unused), &QSet::unit()));
        let shuffle = Relation::shuffle_iso(&sorts, &pi)?;
        Ok(core.compose(&proj.compose(&shuffle)?)?)
    }
}

/// `S ∘ (L × I_ctx)` for `L: 1 -> Q` with blocks `cols` and `S` of arity (Q, ctx..).
fn lift_compose(s: &Relation, nq: usize, cols: &[Subspace], ctx: &[(String, QSet)]) -> Result<Relation, LogicError> {
    let rest = QSet::product_all(&sorts_of(ctx));
    let nr = rest.num_atoms();
    let ids: Vec<Subspace> = (0..nr)
        .map(|r| {
            let d = rest.dim(r);
            Subspace::span(&[crate::CMatrix::identity(d, d)], d, d).expect("square identity")
        })
        .collect();
    Ok(s.compose_columns(&rest, |r| {
        (0..nq)
            .filter(|&q| !cols[q].is_zero())
            .map(|q| (q * nr + r, cols[q].tensor(&ids[r])))
            .collect()
    })?)
}

fn pred_name(p: &Pred) -> String {
    match p {
        Pred::Named(n) => format!("`{n}`"),
        Pred::Eq(s) => format!("E[{s}]"),
    }
}

/// Positions of `vars` in `ctx`, followed by the unused positions in increasing order.
fn extension(vars: &[(String, QSet)], ctx: &[(String, QSet)]) -> Result<Vec<usize>, LogicError> {
    let mut pi = Vec::with_capacity(ctx.len());
    for (v, s) in vars {
        let k = ctx
            .iter()
            .position(|(w, _)| w == v)
            .ok_or_else(|| LogicError::FreeVariableNotInContext(v.clone()))?;
        if &ctx[k].1 != s {
            return Err(sort_err(&format!("variable `{v}`"), &ctx[k].1, s));
        }
        pi.push(k);
    }
    for k in 0..ctx.len() {
        if !pi.contains(&k) {
            pi.push(k);
        }
    }
    Ok(pi)
}

/// `π_#(Q × ⊤ × .. × ⊤)` for `Q` of arity `vars`, placed into `ctx`.
fn place(q: &Relation, vars: &[(String, QSet)], ctx: &[(String, QSet)]) -> Result<Relation, LogicError> {
    let sorts = sorts_of(ctx);
    let pi = extension(vars, ctx)?;
    let unused: Vec<QSet> = pi[vars.len()..].iter().map(|&k| sorts[k].clone()).collect();
    let padded = if unused.is_empty() {
        q.clone()
    } else {
        q.cross(&Relation::top(&QSet::product_all(&unused), &QSet::unit()))
    };
    if pi.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok(padded);
    }
    Ok(padded.permute(&sorts, &pi)?)
}

/// `sup { R | V × R ≤ S }` for `V` of arity `Q`, `S` of arity (Q, rest).
pub fn residual(s: &Relation, v: &Relation, rest: &QSet) -> Result<Relation, LogicError> {
    let q = v.dom().clone();
    let want = q.product(rest);
    if s.dom() != &want {
        return Err(sort_err("residual", &want, s.dom()));
    }
    let unit = QSet::unit();
    let nr = rest.num_atoms();
    let mut out = Relation::top(rest, &unit);
    for r in 0..nr {
        let dr = rest.dim(r);
        let mut acc = Subspace::full(1, dr);
        for a in 0..q.num_atoms() {
            let va = v.block(a, 0);
            if va.is_zero() {
                continue;
            }
            let t = Subspace::residual_factor(va, s.block(a * nr + r, 0), 1, dr)?;
            acc = acc.meet(&t)?;
        }
        out.set_block(r, 0, acc)?;
    }
    Ok(out)
}

/// `sup { R | ⊤_{X_1} × .. × ⊤_{X_m} × R ≤ S }` for `S` of arity `sorts`.
pub fn forall_residual(s: &Relation, sorts: &[QSet], m: usize) -> Result<Relation, LogicError> {
    if m > sorts.len() {
        return Err(LogicError::Sort(format!(
            "cannot quantify {m} leading sorts of {}",
            sorts.len()
        )));
    }
    let q = QSet::product_all(&sorts[..m]);
    let rest = QSet::product_all(&sorts[m..]);
    residual(s, &Relation::top(&q, &QSet::unit()), &rest)
}
