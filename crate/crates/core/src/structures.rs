//! Verifiers for discrete quantum structures.
//!
//! Every condition is checked twice: once as a direct inequality between
//! relations and once as a sentence evaluated by the interpreter. Conditions
//! sharing a `group` are expected to agree between the two paths.

use serde::Serialize;
use thiserror::Error;

use crate::logic::{Env, Formula, Interpreter, LogicError, Term};
use crate::qset::QSet;
use crate::relation::{RelError, Relation};
use crate::subspace::spectral_norm;
use crate::{CMatrix, Subspace};

/// Default pass threshold on margins.
pub const PASS_TOL: f64 = 1e-8;
/// Margins up to this value are reported as numerically unstable.
pub const WARN_TOL: f64 = 1e-6;
/// Largest block dimension of a context a formula path is evaluated on.
pub const FORMULA_DIM_LIMIT: usize = 1024;
/// Largest number of context atoms a formula path is evaluated on.
pub const FORMULA_ATOM_LIMIT: usize = 1 << 16;

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("this mode requires a quantum set with exactly one atom, found {0}")]
    ModeRequiresSingleAtom(usize),
    #[error("metric family invariant violated: {0}")]
    FamilyInvariantViolation(String),
    #[error("not a projection family: {0}")]
    NotProjections(String),
    #[error("labels do not match: {0}")]
    LabelMismatch(String),
    #[error("not a function: {0}")]
    NotAFunction(String),
    #[error("invalid graph: {0}")]
    BadGraph(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Relation(#[from] RelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    Direct,
    Formula,
}

#[derive(Debug, Clone, Serialize)]
pub struct Condition {
    pub id: String,
    pub group: String,
    pub path: Path,
    pub formula_text: String,
    pub passed: bool,
    pub status: Status,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub kind: String,
    pub conditions: Vec<Condition>,
    pub passed: bool,
    pub notes: Vec<String>,
    pub tol: f64,
}

fn judge(margin: f64, tol: f64) -> Status {
    if margin <= tol {
        Status::Pass
    } else if margin <= WARN_TOL.max(tol) {
        Status::Warn
    } else {
        Status::Fail
    }
}

impl VerificationReport {
    pub fn new(kind: &str) -> Self {
        VerificationReport {
            kind: kind.to_string(),
            conditions: Vec::new(),
            passed: true,
            notes: Vec::new(),
            tol: PASS_TOL,
        }
    }

    fn push(&mut self, id: &str, group: &str, path: Path, text: String, margin: f64) {
        let status = judge(margin, self.tol);
        let passed = status == Status::Pass;
        self.passed &= passed;
        self.conditions.push(Condition {
            id: id.to_string(),
            group: group.to_string(),
            path,
            formula_text: text,
            passed,
            status,
            margin,
        });
    }

    /// Recomputes verdicts under a different pass threshold.
    pub fn rejudge(&mut self, tol: f64) {
        self.tol = tol;
        self.passed = true;
        for c in &mut self.conditions {
            c.status = judge(c.margin, tol);
            c.passed = c.status == Status::Pass;
            self.passed &= c.passed;
        }
    }

    /// Overall verdict, worst over groups.
    ///
    /// Formula margins are close to 0 or 1 and do not see the pass threshold.
    /// So when a group's direct margins are not clearly below `PASS_TOL`, the
    /// direct verdict decides the group and the formula path is ignored.
    pub fn status(&self) -> Status {
        let worst = |ss: &mut dyn Iterator<Item = Status>| {
            ss.fold(Status::Pass, |a, b| match (a, b) {
                (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
                (Status::Warn, _) | (_, Status::Warn) => Status::Warn,
                _ => Status::Pass,
            })
        };
        let mut s = Status::Pass;
        for g in self.groups() {
            let in_group = || self.conditions.iter().filter(move |c| c.group == g);
            let direct: Vec<&Condition> = in_group().filter(|c| c.path == Path::Direct).collect();
            let d = worst(&mut direct.iter().map(|c| c.status));
            let clean = direct.iter().all(|c| c.margin <= PASS_TOL);
            let gs = if direct.is_empty() || (d == Status::Pass && clean) {
                worst(&mut in_group().map(|c| c.status))
            } else {
                d
            };
            match gs {
                Status::Fail => return Status::Fail,
                Status::Warn => s = Status::Warn,
                Status::Pass => {}
            }
        }
        s
    }

    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect()
    }

    /// Verdict of one path over all its conditions.
    pub fn path_passed(&self, path: Path) -> bool {
        self.conditions.iter().filter(|c| c.path == path).all(|c| c.passed)
    }

    fn groups(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in &self.conditions {
            if !out.contains(&c.group.as_str()) {
                out.push(&c.group);
            }
        }
        out
    }

    /// Groups whose direct and formula verdicts differ.
    ///
    /// Groups are visited in order and the walk stops at the first group
    /// both paths reject, since later equivalences presuppose earlier ones.
    pub fn disagreements(&self) -> Vec<String> {
        let mut out = Vec::new();
        for g in self.groups() {
            let of = |p: Path| {
                let cs: Vec<_> = self.conditions.iter().filter(|c| c.group == g && c.path == p).collect();
                (!cs.is_empty()).then(|| cs.iter().all(|c| c.passed))
            };
            match (of(Path::Direct), of(Path::Formula)) {
                (Some(a), Some(b)) if a != b => out.push(g.to_string()),
                (Some(false), Some(false)) => break,
                _ => {}
            }
        }
        out
    }
}

/// Accumulates conditions for one structure.
struct Checker<'e> {
    report: VerificationReport,
    env: &'e Env,
}

impl<'e> Checker<'e> {
    fn new(kind: &str, env: &'e Env) -> Self {
        Checker {
            report: VerificationReport::new(kind),
            env,
        }
    }

    fn direct(&mut self, id: &str, group: &str, text: &str, margin: f64) {
        self.report.push(id, group, Path::Direct, text.to_string(), margin);
    }

    fn formula(&mut self, id: &str, group: &str, f: &Formula) -> Result<(), StructureError> {
        let (dim, atoms) = context_size(f);
        if dim > FORMULA_DIM_LIMIT || atoms > FORMULA_ATOM_LIMIT {
            self.report.notes.push(format!(
                "{id}: formula path skipped, context has {atoms} atoms of dimension up to {dim}"
            ));
            return Ok(());
        }
        let margin = Interpreter::new(self.env).truth_margin(f)?;
        self.report.push(id, group, Path::Formula, f.to_string(), margin);
        Ok(())
    }

    fn finish(self) -> VerificationReport {
        self.report
    }
}

/// Largest context block dimension and atom count along any branch.
pub fn context_size(f: &Formula) -> (usize, usize) {
    let both = |a: (usize, usize), b: (usize, usize)| (a.0.max(b.0), a.1.max(b.1));
    let scale = |s: &QSet, k: u32, (d, n): (usize, usize)| {
        let md = s.atom_dims().iter().copied().max().unwrap_or(1);
        (
            d.saturating_mul(md.saturating_pow(k)),
            n.saturating_mul(s.num_atoms().max(1).saturating_pow(k)),
        )
    };
    match f {
        Formula::Top | Formula::Bottom | Formula::Atomic { .. } => (1, 1),
        Formula::Not(a) => context_size(a),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Iff(a, b)
        | Formula::Sasaki(a, b) => both(context_size(a), context_size(b)),
        Formula::Forall { sort, body, .. } | Formula::Exists { sort, body, .. } => {
            scale(sort, 1, context_size(body))
        }
        Formula::ForallDiag { sort, body, .. } | Formula::ExistsDiag { sort, body, .. } => {
            scale(sort, 2, context_size(body))
        }
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn check_endo(r: &Relation) -> Result<QSet, StructureError> {
    if r.dom() != r.cod() {
        return Err(StructureError::SortMismatch(format!(
            "expected an endorelation, found {} -> {}",
            r.dom(),
            r.cod()
        )));
    }
    Ok(r.dom().clone())
}

/// Environment holding the bent relation `R` of arity (X, X*).
fn bent_env(name: &str, r: &Relation, x: &QSet) -> Result<Env, StructureError> {
    let mut env = Env::new();
    env.add_rel(name, vec![x.clone(), x.dual()], r.bend()?)?;
    Ok(env)
}

fn reflexive_formula(x: &QSet) -> Formula {
    Formula::forall_diag("x", "xs", x, Formula::rel("R", &["x", "xs"]))
}

fn transitive_formula(x: &QSet) -> Formula {
    let body = Formula::implies(
        Formula::and(Formula::rel("R", &["x1", "x2s"]), Formula::rel("R", &["x2", "x3s"])),
        Formula::conj_atom("R", vec![v("x1s"), v("x3")]),
    );
    Formula::forall_diag(
        "x1",
        "x1s",
        x,
        Formula::forall_diag("x2", "x2s", x, Formula::forall_diag("x3", "x3s", x, body)),
    )
}

fn add_reflexive(c: &mut Checker, kind: &str, r: &Relation, x: &QSet) -> Result<(), StructureError> {
    let id = format!("{kind}.reflexive");
    c.direct(&id, "reflexive", "I <= R", Relation::identity(x).leq_margin(r)?);
    c.formula(&format!("{id}/formula"), "reflexive", &reflexive_formula(x))
}

fn add_transitive(c: &mut Checker, kind: &str, r: &Relation, x: &QSet) -> Result<(), StructureError> {
    let id = format!("{kind}.transitive");
    c.direct(&id, "transitive", "R o R <= R", r.compose(r)?.leq_margin(r)?);
    c.formula(&format!("{id}/formula"), "transitive", &transitive_formula(x))
}

/// Reflexivity and symmetry of an endorelation.
pub fn check_graph(r: &Relation) -> Result<VerificationReport, StructureError> {
    let x = check_endo(r)?;
    let env = bent_env("R", r, &x)?;
    let mut c = Checker::new("graph", &env);
    add_reflexive(&mut c, "graph", r, &x)?;
    c.direct("graph.symmetric", "symmetric", "R <= R^dagger", r.leq_margin(&r.dagger())?);
    let sym = Formula::forall_diag(
        "x1",
        "x1s",
        &x,
        Formula::forall_diag(
            "x2",
            "x2s",
            &x,
            Formula::implies(Formula::rel("R", &["x1", "x2s"]), Formula::rel("R", &["x2", "x1s"])),
        ),
    );
    c.formula("graph.symmetric/formula", "symmetric", &sym)?;
    Ok(c.finish())
}

/// Reflexivity and transitivity of an endorelation.
pub fn check_preorder(r: &Relation) -> Result<VerificationReport, StructureError> {
    let x = check_endo(r)?;
    let env = bent_env("R", r, &x)?;
    let mut c = Checker::new("preorder", &env);
    add_reflexive(&mut c, "preorder", r, &x)?;
    add_transitive(&mut c, "preorder", r, &x)?;
    Ok(c.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PosetMode {
    /// Antisymmetry `R ∧ R† ≤ I`.
    Weaver,
    /// Antisymmetry `R & R† ≤ I`, for single-atom sets.
    Nilpotent,
}

/// Preorder conditions plus antisymmetry in the chosen form.
pub fn check_poset(r: &Relation, mode: PosetMode) -> Result<VerificationReport, StructureError> {
    let x = check_endo(r)?;
    if mode == PosetMode::Nilpotent && x.num_atoms() != 1 {
        return Err(StructureError::ModeRequiresSingleAtom(x.num_atoms()));
    }
    let kind = match mode {
        PosetMode::Weaver => "poset-weaver",
        PosetMode::Nilpotent => "poset-nilpotent",
    };
    let env = bent_env("R", r, &x)?;
    let mut c = Checker::new(kind, &env);
    add_reflexive(&mut c, kind, r, &x)?;
    add_transitive(&mut c, kind, r, &x)?;
    let id = I::new(&x);
    let rd = r.dagger();
    let forward = Formula::rel("R", &["x1", "x2s"]);
    let back = Formula::conj_atom("R", vec![v("x2s"), v("x1")]);
    let (lhs, text, conn) = match mode {
        PosetMode::Weaver => (r.meet(&rd)?, "R meet R^dagger <= I", Formula::and(forward, back)),
        PosetMode::Nilpotent => (r.sasaki_and(&rd)?, "R & R^dagger <= I", Formula::sasaki(forward, back)),
    };
    let aid = format!("{kind}.antisymmetric");
    c.direct(&aid, "antisymmetric", text, lhs.leq_margin(&id.0)?);
    let f = Formula::forall(
        "x1",
        &x,
        Formula::forall(
            "x2s",
            &x.dual(),
            Formula::implies(conn, Formula::eq(&x, v("x1"), v("x2s"))),
        ),
    );
    c.formula(&format!("{aid}/formula"), "antisymmetric", &f)?;
    if mode == PosetMode::Nilpotent {
        let s = r.meet(&id.0.neg())?;
        c.direct(
            "poset-nilpotent.decomposition.orthogonal",
            "decomposition",
            "S perp I where S = R meet not I",
            s.perp_margin(&id.0)?,
        );
        c.direct(
            "poset-nilpotent.decomposition.closed",
            "decomposition",
            "S o S <= S",
            s.compose(&s)?.leq_margin(&s)?,
        );
        c.direct(
            "poset-nilpotent.decomposition.roundtrip",
            "decomposition",
            "S join I = R",
            s.join(&id.0)?.distance(r)?,
        );
    }
    Ok(c.finish())
}

struct I(Relation);

impl I {
    fn new(x: &QSet) -> Self {
        I(Relation::identity(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionMode {
    Function,
    Injective,
    Surjective,
}

/// The two function-graph sentences for a graph `G` of arity (args.., Y*).
///
/// Totality `∀x.. ∃y* G(x.., y*)` and univalence
/// `∀y1 ∀y2* ((∃(x=x*)..)(G_*(x*.., y1) ∧ G(x.., y2*)) → E_Y(y1, y2*))`.
pub fn function_formulas(g: &str, args: &[QSet], y: &QSet) -> (Formula, Formula) {
    let xs: Vec<String> = (0..args.len()).map(|k| format!("x{k}")).collect();
    let xss: Vec<String> = (0..args.len()).map(|k| format!("x{k}s")).collect();
    let mut a: Vec<Term> = xs.iter().map(|n| v(n)).collect();
    a.push(v("ys"));
    let mut total = Formula::exists("ys", &y.dual(), Formula::atom(g, a.clone()));
    for (n, s) in xs.iter().zip(args).rev() {
        total = Formula::forall(n, s, total);
    }
    let mut b: Vec<Term> = xss.iter().map(|n| v(n)).collect();
    b.push(v("y1"));
    let mut pair = Formula::and(Formula::conj_atom(g, b), Formula::atom(g, {
        let mut t: Vec<Term> = xs.iter().map(|n| v(n)).collect();
        t.push(v("y2s"));
        t
    }));
    for ((n, ns), s) in xs.iter().zip(&xss).zip(args).rev() {
        pair = Formula::exists_diag(n, ns, s, pair);
    }
    let uni = Formula::forall(
        "y1",
        y,
        Formula::forall(
            "y2s",
            &y.dual(),
            Formula::implies(pair, Formula::eq(y, v("y1"), v("y2s"))),
        ),
    );
    (total, uni)
}

fn add_function_conditions(
    c: &mut Checker,
    kind: &str,
    group: &str,
    f: &Relation,
    name: &str,
    args: &[QSet],
) -> Result<(), StructureError> {
    let x = f.dom();
    let y = f.cod();
    let fd = f.dagger();
    c.direct(
        &format!("{kind}.total"),
        group,
        "I <= F^dagger o F",
        Relation::identity(x).leq_margin(&fd.compose(f)?)?,
    );
    c.direct(
        &format!("{kind}.univalent"),
        group,
        "F o F^dagger <= I",
        f.compose(&fd)?.leq_margin(&Relation::identity(y))?,
    );
    let (t, u) = function_formulas(name, args, y);
    c.formula(&format!("{kind}.total/formula"), group, &t)?;
    c.formula(&format!("{kind}.univalent/formula"), group, &u)
}

/// Function, injective function or surjective function conditions for `F: X -> Y`.
pub fn check_function(f: &Relation, mode: FunctionMode) -> Result<VerificationReport, StructureError> {
    let x = f.dom().clone();
    let y = f.cod().clone();
    let mut env = Env::new();
    env.add_fn("F", vec![x.clone()], y.clone(), f.clone())?;
    let kind = match mode {
        FunctionMode::Function => "function",
        FunctionMode::Injective => "injective",
        FunctionMode::Surjective => "surjective",
    };
    let mut c = Checker::new(kind, &env);
    add_function_conditions(&mut c, kind, "function", f, "F", &[x.clone()])?;
    let fd = f.dagger();
    match mode {
        FunctionMode::Function => {}
        FunctionMode::Injective => {
            c.direct(
                "injective.injective",
                "injective",
                "F^dagger o F <= I",
                fd.compose(f)?.leq_margin(&Relation::identity(&x))?,
            );
            let g = Formula::forall(
                "x",
                &x,
                Formula::forall(
                    "xs",
                    &x.dual(),
                    Formula::implies(
                        Formula::eq(&y, Term::app("F", vec![v("x")]), Term::conj_app("F", vec![v("xs")])),
                        Formula::eq(&x, v("x"), v("xs")),
                    ),
                ),
            );
            c.formula("injective.injective/formula", "injective", &g)?;
        }
        FunctionMode::Surjective => {
            c.direct(
                "surjective.surjective",
                "surjective",
                "F o F^dagger = I",
                f.compose(&fd)?.distance(&Relation::identity(&y))?,
            );
            let g = Formula::forall(
                "ys",
                &y.dual(),
                Formula::exists("x", &x, Formula::eq(&y, Term::app("F", vec![v("x")]), v("ys"))),
            );
            c.formula("surjective.surjective/formula", "surjective", &g)?;
        }
    }
    Ok(c.finish())
}

/// Pairwise orthogonal endorelations indexed by distances, joining to ⊤.
#[derive(Debug, Clone)]
pub struct MetricFamily {
    base: QSet,
    values: Vec<f64>,
    relations: Vec<Relation>,
}

impl MetricFamily {
    /// Validates sortedness, endo-arity, pairwise orthogonality and the ⊤ join.
    pub fn new(base: &QSet, mut entries: Vec<(f64, Relation)>) -> Result<Self, StructureError> {
        let bad = StructureError::FamilyInvariantViolation;
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(bad(format!("distance {} listed twice", w[0].0)));
            }
        }
        for (a, r) in &entries {
            if a.is_nan() || *a < 0.0 {
                return Err(bad(format!("distance {a} is not in [0, inf]")));
            }
            if r.dom() != base || r.cod() != base {
                return Err(bad(format!("relation at {a} is not an endorelation on {base}")));
            }
        }
        let fam = MetricFamily {
            base: base.clone(),
            values: entries.iter().map(|e| e.0).collect(),
            relations: entries.into_iter().map(|e| e.1).collect(),
        };
        let (orth, cover) = fam.invariant_margins()?;
        if orth > WARN_TOL {
            return Err(bad(format!("relations are not pairwise orthogonal (margin {orth:.3e})")));
        }
        if cover > WARN_TOL {
            return Err(bad(format!("relations do not join to top (margin {cover:.3e})")));
        }
        Ok(fam)
    }

    fn invariant_margins(&self) -> Result<(f64, f64), StructureError> {
        let mut orth: f64 = 0.0;
        for i in 0..self.relations.len() {
            for j in i + 1..self.relations.len() {
                orth = orth.max(self.relations[i].perp_margin(&self.relations[j])?);
            }
        }
        let top = Relation::top(&self.base, &self.base);
        let cover = top.leq_margin(&self.up_to(f64::INFINITY)?)?;
        Ok((orth, cover))
    }

    pub fn base(&self) -> &QSet {
        &self.base
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// The relation at distance `a`, or ⊥ if `a` is not in the support.
    pub fn at(&self, a: f64) -> Relation {
        match self.values.iter().position(|&b| b == a) {
            Some(k) => self.relations[k].clone(),
            None => Relation::bottom(&self.base, &self.base),
        }
    }

    /// Join of the relations at distances `≤ a`.
    pub fn up_to(&self, a: f64) -> Result<Relation, StructureError> {
        let mut acc = Relation::bottom(&self.base, &self.base);
        for (b, r) in self.values.iter().zip(&self.relations) {
            if *b <= a {
                acc = acc.join(r)?;
            }
        }
        Ok(acc)
    }

    /// Distances with all pairwise sums and ∞, as a classical set.
    fn distance_set(&self) -> (Vec<f64>, QSet) {
        let mut s: Vec<f64> = self.values.clone();
        for a in &self.values {
            for b in &self.values {
                s.push(a + b);
            }
        }
        s.push(0.0);
        s.push(f64::INFINITY);
        s.sort_by(|a, b| a.total_cmp(b));
        s.dedup();
        let labels: Vec<String> = s.iter().map(|a| format!("{a}")).collect();
        let q = QSet::classical("D", &labels).expect("distinct labels");
        (s, q)
    }

    /// Environment with the distance function `F: X x X* -> D` and the
    /// classical structure on `D` used by the metric sentences.
    fn env(&self) -> Result<(Env, QSet), StructureError> {
        let x = &self.base;
        let xx = x.product(&x.dual());
        let (ds, d) = self.distance_set();
        let u = QSet::unit();
        let mut entries = Vec::new();
        for (a, r) in self.values.iter().zip(&self.relations) {
            let k = ds.iter().position(|b| b == a).expect("value in distance set");
            let bent = r.bend()?;
            for i in 0..xx.num_atoms() {
                entries.push((i, k, bent.block(i, 0).clone()));
            }
        }
        let f = Relation::from_blocks(&xx, &d, entries)?;
        let one = Subspace::full(1, 1);
        let n = ds.len();
        let zero = Relation::from_blocks(&u, &d, vec![(0, 0, one.clone())])?;
        let cdual = Relation::from_fn(&d, &d.dual(), |i, j| {
            if i == j {
                one.clone()
            } else {
                Subspace::zero(1, 1)
            }
        });
        let dd = d.product(&d);
        let plus = Relation::from_fn(&dd, &d, |p, q| {
            let s = ds[p / n] + ds[p % n];
            let k = ds.iter().position(|&b| b == s).unwrap_or(n - 1);
            if q == k {
                one.clone()
            } else {
                Subspace::zero(1, 1)
            }
        });
        let le = Relation::from_fn(&d, &d, |i, j| {
            if ds[i] <= ds[j] {
                one.clone()
            } else {
                Subspace::zero(1, 1)
            }
        });
        let mut env = Env::new();
        env.add_fn("F", vec![x.clone(), x.dual()], d.clone(), f)?;
        env.add_fn("zero", vec![], d.clone(), zero)?;
        env.add_fn("C", vec![d.clone()], d.dual(), cdual)?;
        env.add_fn("plus", vec![d.clone(), d.clone()], d.clone(), plus)?;
        env.add_rel("T", vec![d.clone(), d.dual()], le.bend()?)?;
        Ok((env, d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricMode {
    Pseudometric,
    Metric,
}

/// Quantum (pseudo)metric axioms of a distance-indexed family.
pub fn check_metric(m: &MetricFamily, mode: MetricMode) -> Result<VerificationReport, StructureError> {
    let x = m.base.clone();
    let (env, d) = m.env()?;
    let kind = match mode {
        MetricMode::Pseudometric => "pseudometric",
        MetricMode::Metric => "metric",
    };
    let mut c = Checker::new(kind, &env);
    let (orth, cover) = m.invariant_margins()?;
    c.direct(&format!("{kind}.orthogonal"), "family", "R_a perp R_b for a != b", orth);
    c.direct(&format!("{kind}.cover"), "family", "join of R_a = top", cover);

    let id = Relation::identity(&x);
    let r0 = m.at(0.0);
    c.direct(&format!("{kind}.zero"), "zero", "I <= R_0", id.leq_margin(&r0)?);
    let f1 = Formula::forall_diag(
        "x1",
        "x1s",
        &x,
        Formula::eq(
            &d,
            Term::app("F", vec![v("x1"), v("x1s")]),
            Term::conj_app("zero", vec![]),
        ),
    );
    c.formula(&format!("{kind}.zero/formula"), "zero", &f1)?;

    let mut sym: f64 = 0.0;
    for r in &m.relations {
        sym = sym.max(r.distance(&r.dagger())?);
    }
    c.direct(&format!("{kind}.symmetric"), "symmetric", "R_a^dagger = R_a", sym);
    let f2 = Formula::forall_diag(
        "x1",
        "x1s",
        &x,
        Formula::forall_diag(
            "x2",
            "x2s",
            &x,
            Formula::eq(
                &d,
                Term::app("F", vec![v("x1"), v("x2s")]),
                Term::app("C", vec![Term::app("F", vec![v("x2"), v("x1s")])]),
            ),
        ),
    );
    c.formula(&format!("{kind}.symmetric/formula"), "symmetric", &f2)?;

    let mut tri: f64 = 0.0;
    for (a1, r1) in m.values.iter().zip(&m.relations) {
        for (a2, r2) in m.values.iter().zip(&m.relations) {
            let bound = m.up_to(a1 + a2)?;
            tri = tri.max(r2.compose(r1)?.leq_margin(&bound)?);
        }
    }
    c.direct(
        &format!("{kind}.triangle"),
        "triangle",
        "R_b o R_a <= join of R_c for c <= a + b",
        tri,
    );
    let f3 = Formula::forall_diag(
        "x1",
        "x1s",
        &x,
        Formula::forall_diag(
            "x2",
            "x2s",
            &x,
            Formula::forall_diag(
                "x3",
                "x3s",
                &x,
                Formula::atom(
                    "T",
                    vec![
                        Term::app("F", vec![v("x1"), v("x2s")]),
                        Term::conj_app(
                            "plus",
                            vec![
                                Term::conj_app("F", vec![v("x1s"), v("x3")]),
                                Term::conj_app("F", vec![v("x3s"), v("x2")]),
                            ],
                        ),
                    ],
                ),
            ),
        ),
    );
    c.formula(&format!("{kind}.triangle/formula"), "triangle", &f3)?;

    if mode == MetricMode::Metric {
        c.direct("metric.separating", "separating", "R_0 <= I", r0.leq_margin(&id)?);
        let f4 = Formula::forall(
            "x1",
            &x,
            Formula::forall(
                "x2s",
                &x.dual(),
                Formula::implies(
                    Formula::eq(
                        &d,
                        Term::app("F", vec![v("x1"), v("x2s")]),
                        Term::conj_app("zero", vec![]),
                    ),
                    Formula::eq(&x, v("x1"), v("x2s")),
                ),
            ),
        );
        c.formula("metric.separating/formula", "separating", &f4)?;
    }
    Ok(c.finish())
}

/// Projections `p_ab` on a common Hilbert space, indexed by two label sets.
#[derive(Debug, Clone)]
pub struct ProjectionFamily {
    hilbert_dim: usize,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    p: Vec<Vec<CMatrix>>,
}

impl ProjectionFamily {
    /// `p[a][b]` must be an `n x n` projection for every row `a` and column `b`.
    pub fn new(
        hilbert_dim: usize,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        p: Vec<Vec<CMatrix>>,
    ) -> Result<Self, StructureError> {
        let bad = StructureError::NotProjections;
        if hilbert_dim == 0 {
            return Err(bad("Hilbert space dimension is zero".into()));
        }
        if p.len() != row_labels.len() || p.iter().any(|r| r.len() != col_labels.len()) {
            return Err(bad(format!(
                "expected a {} x {} array of matrices",
                row_labels.len(),
                col_labels.len()
            )));
        }
        for (a, row) in p.iter().enumerate() {
            for (b, m) in row.iter().enumerate() {
                if m.shape() != (hilbert_dim, hilbert_dim) {
                    return Err(bad(format!(
                        "p[{}][{}] has shape {:?}, expected {hilbert_dim} x {hilbert_dim}",
                        row_labels[a], col_labels[b],
                        m.shape()
                    )));
                }
                let e = spectral_norm(&(m * m - m)).max(spectral_norm(&(m.adjoint() - m)));
                if e > PASS_TOL {
                    return Err(bad(format!(
                        "p[{}][{}] is not an orthogonal projection (error {e:.3e})",
                        row_labels[a], col_labels[b]
                    )));
                }
            }
        }
        Ok(ProjectionFamily {
            hilbert_dim,
            row_labels,
            col_labels,
            p,
        })
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, a: usize, b: usize) -> &CMatrix {
        &self.p[a][b]
    }

    /// The family with rows and columns exchanged.
    pub fn transposed(&self) -> ProjectionFamily {
        let p = (0..self.col_labels.len())
            .map(|b| (0..self.row_labels.len()).map(|a| self.p[a][b].clone()).collect())
            .collect();
        ProjectionFamily {
            hilbert_dim: self.hilbert_dim,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            p,
        }
    }

    /// Sets `X` (one atom of the Hilbert dimension), `A`, `B` and the
    /// relation `F: X x A -> B` with blocks `L(H, C) p_ab`.
    pub fn to_function(&self) -> (QSet, QSet, QSet, Relation) {
        let n = self.hilbert_dim;
        let x = QSet::from_dims("H", &[n]).expect("nonzero dimension");
        let a = QSet::classical("A", &self.row_labels).expect("row labels");
        let b = QSet::classical("B", &self.col_labels).expect("column labels");
        let dom = x.product(&a);
        let f = Relation::from_fn(&dom, &b, |i, j| {
            let rows: Vec<CMatrix> = (0..n).map(|k| self.p[i][j].rows(k, 1).into_owned()).collect();
            Subspace::span(&rows, 1, n).expect("row vectors")
        });
        (x, a, b, f)
    }

    fn row_margin(&self) -> f64 {
        let n = self.hilbert_dim;
        let mut worst: f64 = 0.0;
        for row in &self.p {
            let s = row.iter().fold(CMatrix::zeros(n, n), |acc, m| acc + m);
            worst = worst.max(spectral_norm(&(CMatrix::identity(n, n) - s)));
        }
        worst
    }

    /// Largest `‖p_{a1 b1} p_{a2 b2}‖` over index pairs selected by `pick`.
    fn product_margin(&self, mut pick: impl FnMut(usize, usize, usize, usize) -> bool) -> f64 {
        let (na, nb) = (self.row_labels.len(), self.col_labels.len());
        let mut worst: f64 = 0.0;
        for a1 in 0..na {
            for a2 in 0..na {
                for b1 in 0..nb {
                    for b2 in 0..nb {
                        if pick(a1, a2, b1, b2) {
                            worst = worst.max(spectral_norm(&(&self.p[a1][b1] * &self.p[a2][b2])));
                        }
                    }
                }
            }
        }
        worst
    }
}

/// A finite simple graph on labelled vertices.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    labels: Vec<String>,
    adj: Vec<Vec<bool>>,
}

impl SimpleGraph {
    /// Undirected edges by vertex index; loops are rejected.
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, StructureError> {
        let n = labels.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(StructureError::BadGraph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(StructureError::BadGraph(format!("loop at `{}`", labels[a])));
            }
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Ok(SimpleGraph { labels, adj })
    }

    pub fn cycle(n: usize) -> Self {
        let labels = (0..n).map(|k| format!("v{k}")).collect();
        let edges: Vec<_> = (0..n).map(|k| (k, (k + 1) % n)).collect();
        Self::new(labels, &edges).expect("cycle of length at least 3")
    }

    pub fn complete(n: usize) -> Self {
        let labels = (0..n).map(|k| format!("v{k}")).collect();
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::new(labels, &edges).expect("complete graph")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The adjacency relation as an endorelation on `a`.
    pub fn relation(&self, a: &QSet) -> Relation {
        Relation::from_fn(a, a, |i, j| {
            if self.adj[i][j] {
                Subspace::full(1, 1)
            } else {
                Subspace::zero(1, 1)
            }
        })
    }
}

/// Sentence `∀(x=x*) ∀(a1=a1*) ∀(a2=a2*) (P(a1, a2*) op Q(F_*(x*, a1*), F(x, a2)))`.
fn game_formula(x: &QSet, a: &QSet, p: Formula, q_conj_pred: &str, q_eq: Option<&QSet>, iff: bool) -> Formula {
    let args = vec![
        Term::conj_app("F", vec![v("xs"), v("a1s")]),
        Term::app("F", vec![v("x"), v("a2")]),
    ];
    let q = match q_eq {
        Some(bd) => Formula::eq(bd, args[0].clone(), args[1].clone()),
        None => Formula::conj_atom(q_conj_pred, args),
    };
    let body = if iff { Formula::iff(p, q) } else { Formula::implies(p, q) };
    Formula::forall_diag(
        "x",
        "xs",
        x,
        Formula::forall_diag("a1", "a1s", a, Formula::forall_diag("a2", "a2s", a, body)),
    )
}

/// `∀x ∀b* ∃a E_B(F(x, a), b*)`.
fn covering_formula(x: &QSet, a: &QSet, b: &QSet) -> Formula {
    Formula::forall(
        "x",
        x,
        Formula::forall(
            "bs",
            &b.dual(),
            Formula::exists("a", a, Formula::eq(b, Term::app("F", vec![v("x"), v("a")]), v("bs"))),
        ),
    )
}

fn add_rows(c: &mut Checker, kind: &str, p: &ProjectionFamily, f: &Relation, x: &QSet, a: &QSet) -> Result<(), StructureError> {
    c.direct(&format!("{kind}.rows"), "rows", "sum_b p_ab = 1 for every a", p.row_margin());
    c.direct(
        &format!("{kind}.same_row"),
        "rows",
        "p_ab p_ab' = 0 for b != b'",
        p.product_margin(|a1, a2, b1, b2| a1 == a2 && b1 != b2),
    );
    let (t, u) = function_formulas("F", &[x.clone(), a.clone()], f.cod());
    c.formula(&format!("{kind}.rows.total/formula"), "rows", &t)?;
    c.formula(&format!("{kind}.rows.univalent/formula"), "rows", &u)
}

fn function_env(f: &Relation, x: &QSet, a: &QSet, b: &QSet) -> Result<Env, StructureError> {
    let mut env = Env::new();
    env.add_fn("F", vec![x.clone(), a.clone()], b.clone(), f.clone())?;
    Ok(env)
}

/// Row and column sums equal to the identity.
pub fn check_magic_unitary(p: &ProjectionFamily) -> Result<VerificationReport, StructureError> {
    let (x, a, b, f) = p.to_function();
    let env = function_env(&f, &x, &a, &b)?;
    let mut c = Checker::new("magic-unitary", &env);
    add_rows(&mut c, "magic-unitary", p, &f, &x, &a)?;
    c.direct(
        "magic-unitary.same_column",
        "orthogonal",
        "p_ab p_a'b = 0 for a != a'",
        p.product_margin(|a1, a2, b1, b2| a1 != a2 && b1 == b2),
    );
    let g = game_formula(&x, &a, Formula::eq(&a, v("a1"), v("a2s")), "", Some(&b.dual()), true);
    c.formula("magic-unitary.orthogonal/formula", "orthogonal", &g)?;
    c.direct("magic-unitary.columns", "columns", "sum_a p_ab = 1 for every b", p.transposed().row_margin());
    c.formula("magic-unitary.columns/formula", "columns", &covering_formula(&x, &a, &b))?;
    Ok(c.finish())
}

fn check_labels(p: &ProjectionFamily, ga: &SimpleGraph, gb: &SimpleGraph) -> Result<(), StructureError> {
    if p.row_labels() != ga.labels() {
        return Err(StructureError::LabelMismatch(format!(
            "family rows {:?} differ from the first graph's vertices {:?}",
            p.row_labels(),
            ga.labels()
        )));
    }
    if p.col_labels() != gb.labels() {
        return Err(StructureError::LabelMismatch(format!(
            "family columns {:?} differ from the second graph's vertices {:?}",
            p.col_labels(),
            gb.labels()
        )));
    }
    Ok(())
}

fn game_env(f: &Relation, x: &QSet, a: &QSet, b: &QSet, ga: &SimpleGraph, gb: &SimpleGraph) -> Result<Env, StructureError> {
    let mut env = function_env(f, x, a, b)?;
    env.add_rel("R", vec![a.clone(), a.dual()], ga.relation(a).bend()?)?;
    env.add_rel("S", vec![b.clone(), b.dual()], gb.relation(b).bend()?)?;
    Ok(env)
}

/// Perfect quantum strategy for the homomorphism game from `ga` to `gb`.
pub fn check_hom_witness(p: &ProjectionFamily, ga: &SimpleGraph, gb: &SimpleGraph) -> Result<VerificationReport, StructureError> {
    check_labels(p, ga, gb)?;
    let (x, a, b, f) = p.to_function();
    let env = game_env(&f, &x, &a, &b, ga, gb)?;
    let mut c = Checker::new("hom-witness", &env);
    add_rows(&mut c, "hom-witness", p, &f, &x, &a)?;
    c.direct(
        "hom-witness.adjacency",
        "adjacency",
        "p_{a1 b1} p_{a2 b2} = 0 if a1 ~ a2 and not b1 ~ b2",
        p.product_margin(|a1, a2, b1, b2| ga.adjacent(a1, a2) && !gb.adjacent(b1, b2)),
    );
    let g = game_formula(&x, &a, Formula::rel("R", &["a1", "a2s"]), "S", None, false);
    c.formula("hom-witness.adjacency/formula", "adjacency", &g)?;
    Ok(c.finish())
}

/// Perfect quantum strategy for the isomorphism game between `ga` and `gb`.
pub fn check_iso_witness(p: &ProjectionFamily, ga: &SimpleGraph, gb: &SimpleGraph) -> Result<VerificationReport, StructureError> {
    check_labels(p, ga, gb)?;
    let (x, a, b, f) = p.to_function();
    let env = game_env(&f, &x, &a, &b, ga, gb)?;
    let mut c = Checker::new("iso-witness", &env);
    add_rows(&mut c, "iso-witness", p, &f, &x, &a)?;
    c.direct(
        "iso-witness.same_column",
        "orthogonal",
        "p_ab p_a'b = 0 for a != a'",
        p.product_margin(|a1, a2, b1, b2| a1 != a2 && b1 == b2),
    );
    let g = game_formula(&x, &a, Formula::eq(&a, v("a1"), v("a2s")), "", Some(&b.dual()), true);
    c.formula("iso-witness.orthogonal/formula", "orthogonal", &g)?;
    c.direct("iso-witness.columns", "columns", "sum_a p_ab = 1 for every b", p.transposed().row_margin());
    c.formula("iso-witness.columns/formula", "columns", &covering_formula(&x, &a, &b))?;
    c.direct(
        "iso-witness.adjacency",
        "adjacency",
        "p_{a1 b1} p_{a2 b2} = 0 if a1 ~ a2 and not b1 ~ b2",
        p.product_margin(|a1, a2, b1, b2| ga.adjacent(a1, a2) && !gb.adjacent(b1, b2)),
    );
    c.direct(
        "iso-witness.adjacency_reverse",
        "adjacency",
        "p_{a1 b1} p_{a2 b2} = 0 if b1 ~ b2 and not a1 ~ a2",
        p.product_margin(|a1, a2, b1, b2| gb.adjacent(b1, b2) && !ga.adjacent(a1, a2)),
    );
    let g = game_formula(&x, &a, Formula::rel("R", &["a1", "a2s"]), "S", None, true);
    c.formula("iso-witness.adjacency/formula", "adjacency", &g)?;
    Ok(c.finish())
}

/// Discrete quantum group axioms for a multiplication `F: X x X -> X` and unit `C: 1 -> X`.
pub fn check_quantum_group(f: &Relation, cu: &Relation) -> Result<VerificationReport, StructureError> {
    let x = f.cod().clone();
    if f.dom() != &x.product(&x) {
        return Err(StructureError::SortMismatch(format!(
            "multiplication must have type X >< X -> X, found {} -> {}",
            f.dom(),
            f.cod()
        )));
    }
    if !cu.dom().is_unit() || cu.cod() != &x {
        return Err(StructureError::SortMismatch(format!(
            "unit must have type 1 -> {x}, found {} -> {}",
            cu.dom(),
            cu.cod()
        )));
    }
    for (name, r) in [("multiplication", f), ("unit", cu)] {
        let rep = check_function(r, FunctionMode::Function)?;
        if !rep.path_passed(Path::Direct) {
            return Err(StructureError::NotAFunction(format!(
                "{name} fails {}",
                rep.failed_ids().join(", ")
            )));
        }
    }
    let mut env = Env::new();
    env.add_fn("F", vec![x.clone(), x.clone()], x.clone(), f.clone())?;
    env.add_fn("C", vec![], x.clone(), cu.clone())?;
    let mut c = Checker::new("quantum-group", &env);
    let id = Relation::identity(&x);

    let lhs = f.compose(&f.cross(&id))?;
    let rhs = f.compose(&id.cross(f))?;
    c.direct("quantum-group.associative", "associative", "F o (F x I) = F o (I x F)", lhs.distance(&rhs)?);
    let assoc = Formula::forall_diag(
        "x1",
        "x1s",
        &x,
        Formula::forall_diag(
            "x2",
            "x2s",
            &x,
            Formula::forall_diag(
                "x3",
                "x3s",
                &x,
                Formula::eq(
                    &x,
                    Term::app("F", vec![Term::app("F", vec![v("x1"), v("x2")]), v("x3")]),
                    Term::conj_app("F", vec![v("x1s"), Term::conj_app("F", vec![v("x2s"), v("x3s")])]),
                ),
            ),
        ),
    );
    c.formula("quantum-group.associative/formula", "associative", &assoc)?;

    let unit_c = Term::app("C", vec![]);
    c.direct(
        "quantum-group.right_unit",
        "right_unit",
        "F o (I x C) = I",
        f.compose(&id.cross(cu))?.distance(&id)?,
    );
    let ru = Formula::forall_diag(
        "x",
        "xs",
        &x,
        Formula::eq(&x, Term::app("F", vec![v("x"), unit_c.clone()]), v("xs")),
    );
    c.formula("quantum-group.right_unit/formula", "right_unit", &ru)?;
    c.direct(
        "quantum-group.left_unit",
        "left_unit",
        "F o (C x I) = I",
        f.compose(&cu.cross(&id))?.distance(&id)?,
    );
    let lu = Formula::forall_diag(
        "x",
        "xs",
        &x,
        Formula::eq(&x, Term::app("F", vec![unit_c, v("x")]), v("xs")),
    );
    c.formula("quantum-group.left_unit/formula", "left_unit", &lu)?;

    let inv = |outer: &str, inner: &str| {
        Formula::forall(
            outer,
            &x,
            Formula::exists(
                inner,
                &x,
                Formula::eq(
                    &x,
                    Term::app("F", vec![v("x1"), v("x2")]),
                    Term::conj_app("C", vec![]),
                ),
            ),
        )
    };
    c.formula("quantum-group.right_inverse/formula", "right_inverse", &inv("x1", "x2"))?;
    c.formula("quantum-group.left_inverse/formula", "left_inverse", &inv("x2", "x1"))?;
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::c;

    fn m2(e: [[f64; 2]; 2]) -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| c(e[i][j], 0.0))
    }

    fn endo(x: &QSet, mats: &[CMatrix]) -> Relation {
        let d = x.dim(0);
        Relation::from_blocks(x, x, vec![(0, 0, Subspace::span(mats, d, d).unwrap())]).unwrap()
    }

    fn x2() -> QSet {
        QSet::from_dims("X", &[2]).unwrap()
    }

    fn agree(r: &VerificationReport) {
        assert!(r.disagreements().is_empty(), "{:#?}", r);
    }

    #[test]
    fn operator_system_is_a_graph() {
        let x = x2();
        let r = endo(&x, &[m2([[1., 0.], [0., 1.]]), m2([[0., 1.], [1., 0.]])]);
        let rep = check_graph(&r).unwrap();
        agree(&rep);
        assert!(rep.passed, "{rep:#?}");
    }

    #[test]
    fn single_matrix_unit_is_not_reflexive() {
        let x = x2();
        let r = endo(&x, &[m2([[0., 1.], [0., 0.]])]);
        let rep = check_graph(&r).unwrap();
        agree(&rep);
        assert!(!rep.condition("graph.reflexive").unwrap().passed);
        assert!(!rep.condition("graph.reflexive/formula").unwrap().passed);
    }

    #[test]
    fn upper_triangular_is_nilpotent_poset() {
        let x = x2();
        let r = endo(&x, &[m2([[1., 0.], [0., 1.]]), m2([[0., 1.], [0., 0.]])]);
        for mode in [PosetMode::Weaver, PosetMode::Nilpotent] {
            let rep = check_poset(&r, mode).unwrap();
            agree(&rep);
            assert!(rep.passed, "{rep:#?}");
        }
        let s = endo(&x, &[m2([[1., 0.], [0., 1.]]), m2([[1., 0.], [0., 0.]])]);
        let rep = check_poset(&s, PosetMode::Weaver).unwrap();
        agree(&rep);
        assert!(!rep.condition("poset-weaver.antisymmetric").unwrap().passed);
    }

    #[test]
    fn nilpotent_needs_one_atom() {
        let x = QSet::from_dims("X", &[1, 1]).unwrap();
        let r = Relation::identity(&x);
        assert!(matches!(
            check_poset(&r, PosetMode::Nilpotent),
            Err(StructureError::ModeRequiresSingleAtom(2))
        ));
    }

    #[test]
    fn identity_is_a_bijection() {
        let x = QSet::from_dims("X", &[2, 1]).unwrap();
        let id = Relation::identity(&x);
        for mode in [FunctionMode::Function, FunctionMode::Injective, FunctionMode::Surjective] {
            let rep = check_function(&id, mode).unwrap();
            agree(&rep);
            assert!(rep.passed, "{rep:#?}");
        }
    }

    #[test]
    fn scaled_diagonal_is_not_a_function() {
        let x = x2();
        let r = endo(&x, &[m2([[1., 0.], [0., 2.]])]);
        let rep = check_function(&r, FunctionMode::Surjective).unwrap();
        agree(&rep);
        assert!(!rep.passed);
        let top = Relation::top(&x, &x);
        assert!(top.compose(&r.dagger()).unwrap().approx_eq(&top));
    }

    #[test]
    fn rejudge_moves_warn_band() {
        let mut rep = VerificationReport::new("t");
        rep.push("a", "g", Path::Direct, String::new(), 1e-7);
        assert_eq!(rep.status(), Status::Warn);
        assert!(!rep.passed);
        rep.rejudge(1e-6);
        assert!(rep.passed);
        assert_eq!(rep.status(), Status::Pass);
    }

    #[test]
    fn warn_band_direct_margin_outranks_formula_verdict() {
        let mut rep = VerificationReport::new("t");
        rep.push("a", "g", Path::Direct, String::new(), 1e-7);
        rep.push("a/formula", "g", Path::Formula, String::new(), 1.0);
        assert_eq!(rep.status(), Status::Warn);
        rep.rejudge(1e-6);
        assert_eq!(rep.status(), Status::Pass);
        rep.push("b/formula", "h", Path::Formula, String::new(), 1.0);
        assert_eq!(rep.status(), Status::Fail);
        let mut clean = VerificationReport::new("t");
        clean.push("a", "g", Path::Direct, String::new(), 0.0);
        clean.push("a/formula", "g", Path::Formula, String::new(), 1.0);
        assert_eq!(clean.status(), Status::Fail);
    }
}
