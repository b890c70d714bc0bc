//! Name resolution and sort checking: surface AST to relations, formulas and structures.

use std::collections::{BTreeMap, BTreeSet};

use super::diag::{Diagnostic, Source, Span};
use super::print;
use super::syntax::*;
use crate::generators::group::{dual_group_named, lift_monoid, Irrep, IrrepData, QuantumGroupData};
use crate::logic::{Env, Formula, Pred, Term};
use crate::qset::QSet;
use crate::relation::Relation;
use crate::structures::{
    check_function, check_graph, check_hom_witness, check_iso_witness, check_magic_unitary, check_metric,
    check_poset, check_preorder, check_quantum_group, FunctionMode, MetricFamily, MetricMode, PosetMode,
    ProjectionFamily, SimpleGraph, StructureError, VerificationReport,
};
use crate::subspace::c;
use crate::{CMatrix, Subspace};

/// A formula declaration after resolution.
#[derive(Debug, Clone)]
pub struct NamedFormula {
    pub name: String,
    pub formula: Formula,
    /// Free variables in order of first appearance, with inferred sorts.
    pub context: Vec<(String, QSet)>,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct AssertItem {
    pub formula: String,
    pub expect: bool,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct VerifyItem {
    pub kind: VerifyKind,
    pub names: Vec<String>,
    pub line: usize,
}

/// A resolved workspace.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub qsets: BTreeMap<String, QSet>,
    pub env: Env,
    /// Declared relations as binary relations `A -> B`, where that reading exists.
    pub binary: BTreeMap<String, Relation>,
    pub formulas: Vec<NamedFormula>,
    pub metrics: BTreeMap<String, MetricFamily>,
    pub families: BTreeMap<String, ProjectionFamily>,
    pub graphs: BTreeMap<String, SimpleGraph>,
    pub groups: BTreeMap<String, QuantumGroupData>,
    pub asserts: Vec<AssertItem>,
    pub verifies: Vec<VerifyItem>,
}

/// What a verify request acts on.
pub enum Target<'w> {
    Endo(Relation),
    Function(Relation),
    Metric(&'w MetricFamily),
    Family(&'w ProjectionFamily),
    Game(&'w ProjectionFamily, &'w SimpleGraph, &'w SimpleGraph),
    Group(Relation, Relation),
}

/// A verify request that names the wrong things; `arg` is the offending name's position.
#[derive(Debug, Clone)]
pub struct TargetError {
    pub arg: Option<usize>,
    pub message: String,
}

fn terr(arg: Option<usize>, message: String) -> TargetError {
    TargetError { arg, message }
}

impl Workspace {
    pub fn formula(&self, name: &str) -> Option<&NamedFormula> {
        self.formulas.iter().find(|f| f.name == name)
    }

    fn binary_rel(&self, name: &str, k: usize) -> Result<Relation, TargetError> {
        if let Some(r) = self.binary.get(name) {
            return Ok(r.clone());
        }
        if let Some(f) = self.env.func(name) {
            return Ok(f.rel.clone());
        }
        if self.env.rel(name).is_some() {
            return Err(terr(Some(k), format!("relation `{name}` does not have two arguments")));
        }
        Err(terr(Some(k), format!("no relation or function named `{name}`")))
    }

    /// Looks up the objects a structure kind acts on.
    pub fn target(&self, kind: VerifyKind, names: &[String]) -> Result<Target<'_>, TargetError> {
        use VerifyKind::*;
        let want = match kind {
            HomWitness | IsoWitness => vec![3],
            QuantumGroup => vec![1, 2],
            _ => vec![1],
        };
        if !want.contains(&names.len()) {
            let w: Vec<String> = want.iter().map(usize::to_string).collect();
            return Err(terr(
                None,
                format!("`{}` takes {} name(s), given {}", kind.name(), w.join(" or "), names.len()),
            ));
        }
        let n = &names[0];
        match kind {
            Graph | Preorder | PosetWeaver | PosetNilpotent => {
                let r = self.binary_rel(n, 0)?;
                if r.dom() != r.cod() {
                    return Err(terr(
                        Some(0),
                        format!("`{n}` is a relation {} -> {}, expected an endorelation", r.dom(), r.cod()),
                    ));
                }
                Ok(Target::Endo(r))
            }
            Function | Injective | Surjective => Ok(Target::Function(self.binary_rel(n, 0)?)),
            Metric | Pseudometric => self
                .metrics
                .get(n)
                .map(Target::Metric)
                .ok_or_else(|| terr(Some(0), format!("no metric named `{n}`"))),
            MagicUnitary => self
                .families
                .get(n)
                .map(Target::Family)
                .ok_or_else(|| terr(Some(0), format!("no family named `{n}`"))),
            HomWitness | IsoWitness => {
                let p = self.families.get(n).ok_or_else(|| terr(Some(0), format!("no family named `{n}`")))?;
                let g = |k: usize| {
                    self.graphs
                        .get(&names[k])
                        .ok_or_else(|| terr(Some(k), format!("no graph named `{}`", names[k])))
                };
                Ok(Target::Game(p, g(1)?, g(2)?))
            }
            QuantumGroup => {
                if names.len() == 1 {
                    let g = self.groups.get(n).ok_or_else(|| terr(Some(0), format!("no group named `{n}`")))?;
                    return Ok(Target::Group(g.mult.clone(), g.unit.clone()));
                }
                Ok(Target::Group(self.binary_rel(n, 0)?, self.binary_rel(&names[1], 1)?))
            }
        }
    }

    /// Runs the checker for `kind` on the named objects.
    pub fn verify(&self, kind: VerifyKind, names: &[String]) -> Result<VerificationReport, VerifyError> {
        use VerifyKind::*;
        let t = self.target(kind, names).map_err(VerifyError::Target)?;
        let r = match (kind, t) {
            (Graph, Target::Endo(r)) => check_graph(&r),
            (Preorder, Target::Endo(r)) => check_preorder(&r),
            (PosetWeaver, Target::Endo(r)) => check_poset(&r, PosetMode::Weaver),
            (PosetNilpotent, Target::Endo(r)) => check_poset(&r, PosetMode::Nilpotent),
            (Function, Target::Function(f)) => check_function(&f, FunctionMode::Function),
            (Injective, Target::Function(f)) => check_function(&f, FunctionMode::Injective),
            (Surjective, Target::Function(f)) => check_function(&f, FunctionMode::Surjective),
            (Metric, Target::Metric(m)) => check_metric(m, MetricMode::Metric),
            (Pseudometric, Target::Metric(m)) => check_metric(m, MetricMode::Pseudometric),
            (MagicUnitary, Target::Family(p)) => check_magic_unitary(p),
            (HomWitness, Target::Game(p, a, b)) => check_hom_witness(p, a, b),
            (IsoWitness, Target::Game(p, a, b)) => check_iso_witness(p, a, b),
            (QuantumGroup, Target::Group(f, u)) => check_quantum_group(&f, &u),
            _ => unreachable!("target matches kind"),
        };
        r.map_err(VerifyError::Structure)
    }
}

#[derive(Debug)]
pub enum VerifyError {
    Target(TargetError),
    Structure(StructureError),
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyError::Target(t) => write!(f, "{}", t.message),
            VerifyError::Structure(e) => write!(f, "{e}"),
        }
    }
}

const NONDUP_HINT: &str = "in nonduplicating logic a variable may occur at most once inside one atomic formula; \
     relate two copies with a diagonal quantifier `forall x == xs in X .` or an equality atom `E[X](x, xs)`";

struct Resolver<'a> {
    src: &'a Source<'a>,
    ws: Workspace,
    diags: Vec<Diagnostic>,
    /// Names whose declaration failed; references to them are not reported again.
    poisoned: BTreeSet<String>,
    formula_names: BTreeSet<String>,
    objects: BTreeSet<String>,
}

/// Scope while resolving one formula.
#[derive(Default)]
struct Scope {
    bound: Vec<(String, QSet)>,
    free: Vec<(String, QSet, Span)>,
    binders: Vec<(String, Span)>,
    ok: bool,
}

impl Scope {
    fn lookup(&self, v: &str) -> Option<&QSet> {
        self.bound
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, s)| s)
            .or_else(|| self.free.iter().find(|(w, _, _)| w == v).map(|(_, s, _)| s))
    }
}

/// Resolves a parsed workspace.
pub fn resolve(src: &Source, ast: &WorkspaceAst) -> Result<Workspace, Vec<Diagnostic>> {
    let mut r = Resolver {
        src,
        ws: Workspace::default(),
        diags: Vec::new(),
        poisoned: BTreeSet::new(),
        formula_names: BTreeSet::new(),
        objects: BTreeSet::new(),
    };
    for d in &ast.decls {
        r.decl(d);
    }
    if r.diags.is_empty() {
        Ok(r.ws)
    } else {
        Err(r.diags)
    }
}

impl<'a> Resolver<'a> {
    fn err(&mut self, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(self.src, span, msg));
    }

    fn line(&self, span: Span) -> usize {
        self.src.locate(span.start).line
    }

    fn fresh(&mut self, taken: bool, what: &str, name: &Ident) -> bool {
        if taken {
            self.err(name.span, format!("{what} `{}` is declared twice", name.name));
            return false;
        }
        true
    }

    pub fn sort(&mut self, s: &SortExpr) -> Option<QSet> {
        match s {
            SortExpr::Name(i) => match self.ws.qsets.get(&i.name) {
                Some(q) => Some(q.clone()),
                None => {
                    if !self.poisoned.contains(&i.name) {
                        self.err(i.span, format!("unknown quantum set `{}`", i.name));
                    }
                    None
                }
            },
            SortExpr::Unit(_) => Some(QSet::unit()),
            SortExpr::Dual(a, _) => self.sort(a).map(|q| q.dual()),
            SortExpr::Product(a, b) => {
                let (x, y) = (self.sort(a), self.sort(b));
                Some(x?.product(&y?))
            }
        }
    }

    fn matrix(&mut self, m: &MatrixLit, rows: usize, cols: usize) -> Option<CMatrix> {
        let (r, k) = m.shape();
        if (r, k) != (rows, cols) {
            self.err(m.span, format!("matrix is {r} x {k}, expected {rows} x {cols}"));
            return None;
        }
        Some(CMatrix::from_fn(rows, cols, |i, j| c(m.rows[i][j].0, m.rows[i][j].1)))
    }

    fn span_of(&mut self, mats: &[MatrixLit], rows: usize, cols: usize) -> Option<Subspace> {
        let mut ms = Vec::with_capacity(mats.len());
        let mut ok = true;
        for m in mats {
            match self.matrix(m, rows, cols) {
                Some(x) => ms.push(x),
                None => ok = false,
            }
        }
        if !ok {
            return None;
        }
        if ms.is_empty() {
            return Some(Subspace::zero(rows, cols));
        }
        Subspace::span(&ms, rows, cols).ok()
    }

    /// Builds a relation `dom -> cod` from block entries. `split` maps an entry's
    /// index list to a (domain atom, codomain atom) pair.
    fn relation(
        &mut self,
        dom: &QSet,
        cod: &QSet,
        blocks: &[BlockEntry],
        split: impl Fn(&[usize]) -> Result<(usize, usize), String>,
    ) -> Option<Relation> {
        let mut entries: Vec<(usize, usize, Subspace)> = Vec::new();
        let mut ok = true;
        for b in blocks {
            let idx: Vec<usize> = b.index.iter().map(|i| i.value).collect();
            let (i, j) = match split(&idx) {
                Ok(p) => p,
                Err(m) => {
                    let span = b.index.first().map_or(b.span, |f| f.span.to(b.index.last().expect("nonempty").span));
                    self.err(span, m);
                    ok = false;
                    continue;
                }
            };
            if entries.iter().any(|(a, b2, _)| (*a, *b2) == (i, j)) {
                self.err(b.span, format!("block ({}) is given twice", idx.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")));
                ok = false;
                continue;
            }
            match self.span_of(&b.mats, cod.dim(j), dom.dim(i)) {
                Some(s) => entries.push((i, j, s)),
                None => ok = false,
            }
        }
        if !ok {
            return None;
        }
        Relation::from_blocks(dom, cod, entries).ok()
    }

    fn decl(&mut self, d: &Decl) {
        match d {
            Decl::QSet { name, body } => {
                if !self.fresh(self.ws.qsets.contains_key(&name.name), "quantum set", name) {
                    return;
                }
                let q = match body {
                    QSetBody::Atoms(dims) => {
                        if let Some(z) = dims.iter().find(|i| i.value == 0) {
                            self.err(z.span, "atoms must have positive dimension");
                            self.poisoned.insert(name.name.clone());
                            return;
                        }
                        let v: Vec<usize> = dims.iter().map(|i| i.value).collect();
                        QSet::from_dims(&name.name, &v)
                    }
                    QSetBody::Classical(labels) => {
                        let v: Vec<&str> = labels.iter().map(|s| s.value.as_str()).collect();
                        QSet::classical(&name.name, &v)
                    }
                };
                match q {
                    Ok(q) => {
                        self.ws.qsets.insert(name.name.clone(), q);
                    }
                    Err(e) => {
                        self.err(name.span, e.to_string());
                        self.poisoned.insert(name.name.clone());
                    }
                }
            }
            Decl::Rel { name, sorts, blocks } => {
                if !self.fresh(self.ws.env.has(&name.name), "symbol", name) {
                    return;
                }
                let qs: Vec<Option<QSet>> = sorts.iter().map(|s| self.sort(s)).collect();
                let Some(qs) = qs.into_iter().collect::<Option<Vec<QSet>>>() else {
                    self.poisoned.insert(name.name.clone());
                    return;
                };
                let dom = QSet::product_all(&qs);
                let radices: Vec<usize> = qs.iter().map(QSet::num_atoms).collect();
                let rel = self.relation(&dom, &QSet::unit(), blocks, |idx| {
                    if idx.len() != radices.len() {
                        return Err(format!("block index has {} entries, the relation has arity {}", idx.len(), radices.len()));
                    }
                    let mut flat = 0;
                    for (k, (&i, &n)) in idx.iter().zip(&radices).enumerate() {
                        if i >= n {
                            return Err(format!("index {i} at position {k} is out of range, the sort has {n} atoms"));
                        }
                        flat = flat * n + i;
                    }
                    Ok((flat, 0))
                });
                let Some(rel) = rel else {
                    self.poisoned.insert(name.name.clone());
                    return;
                };
                if qs.len() == 2 {
                    if let Ok(b) = rel.unbend(&qs[0], &qs[1].dual()) {
                        self.ws.binary.insert(name.name.clone(), b);
                    }
                }
                if let Err(e) = self.ws.env.add_rel(&name.name, qs, rel) {
                    self.err(name.span, e.to_string());
                }
            }
            Decl::BinRel { name, dom, cod, blocks } => {
                if !self.fresh(self.ws.env.has(&name.name), "symbol", name) {
                    return;
                }
                let (Some(x), Some(y)) = (self.sort(dom), self.sort(cod)) else {
                    self.poisoned.insert(name.name.clone());
                    return;
                };
                let Some(rel) = self.binary_blocks(&x, &y, blocks) else {
                    self.poisoned.insert(name.name.clone());
                    return;
                };
                let bent = rel.bend().expect("bend of a binary relation");
                if let Err(e) = self.ws.env.add_rel(&name.name, vec![x, y.dual()], bent) {
                    self.err(name.span, e.to_string());
                }
                self.ws.binary.insert(name.name.clone(), rel);
            }
            Decl::Fn { name, dom, cod, blocks } => {
                if !self.fresh(self.ws.env.has(&name.name), "symbol", name) {
                    return;
                }
                let args: Vec<Option<QSet>> = dom.factors().into_iter().map(|s| self.sort(s)).collect();
                let y = self.sort(cod);
                let (Some(args), Some(y)) = (args.into_iter().collect::<Option<Vec<QSet>>>(), y) else {
                    self.poisoned.insert(name.name.clone());
                    return;
                };
                let x = QSet::product_all(&args);
                let Some(rel) = self.binary_blocks(&x, &y, blocks) else {
                    self.poisoned.insert(name.name.clone());
                    return;
                };
                if let Err(e) = self.ws.env.add_fn(&name.name, args, y, rel) {
                    self.err(name.span, e.to_string());
                }
            }
            Decl::Const { name, sort, blocks } => {
                if !self.fresh(self.ws.env.has(&name.name), "symbol", name) {
                    return;
                }
                let Some(y) = self.sort(sort) else {
                    self.poisoned.insert(name.name.clone());
                    return;
                };
                let n = y.num_atoms();
                let rel = self.relation(&QSet::unit(), &y, blocks, |idx| match idx {
                    [j] if *j < n => Ok((0, *j)),
                    [j] => Err(format!("atom index {j} is out of range, the sort has {n} atoms")),
                    _ => Err("a constant's block has a single index".to_string()),
                });
                let Some(rel) = rel else {
                    self.poisoned.insert(name.name.clone());
                    return;
                };
                if let Err(e) = self.ws.env.add_fn(&name.name, vec![], y, rel) {
                    self.err(name.span, e.to_string());
                }
            }
            Decl::Formula { name, body } => {
                if !self.fresh(self.formula_names.contains(&name.name), "formula", name) {
                    return;
                }
                self.formula_names.insert(name.name.clone());
                let mut scope = Scope { ok: true, ..Scope::default() };
                let f = self.formula(body, &mut scope);
                for (v, _, span) in &scope.free {
                    if let Some((_, b)) = scope.binders.iter().find(|(w, _)| w == v) {
                        let (v, span, b) = (v.clone(), *span, *b);
                        self.err(span, format!("variable `{v}` is used free and also bound"));
                        self.err(b, format!("`{v}` is bound here"));
                        scope.ok = false;
                    }
                }
                match f {
                    Some(f) if scope.ok => self.ws.formulas.push(NamedFormula {
                        name: name.name.clone(),
                        formula: f,
                        context: scope.free.into_iter().map(|(v, s, _)| (v, s)).collect(),
                        line: self.line(name.span),
                    }),
                    _ => {
                        self.poisoned.insert(name.name.clone());
                    }
                }
            }
            Decl::Assert { name, expect, span } => {
                match self.ws.formula(&name.name) {
                    Some(f) if !f.context.is_empty() => {
                        let vars: Vec<&str> = f.context.iter().map(|(v, _)| v.as_str()).collect();
                        let msg = format!("`{}` has free variables {} and is not a sentence", name.name, vars.join(", "));
                        self.err(name.span, msg);
                    }
                    Some(_) => {}
                    None => {
                        if !self.poisoned.contains(&name.name) {
                            self.err(name.span, format!("unknown formula `{}`", name.name));
                        }
                        return;
                    }
                }
                let line = self.line(*span);
                self.ws.asserts.push(AssertItem { formula: name.name.clone(), expect: *expect, line });
            }
            Decl::Verify { kind, kind_span, names } => {
                if names.iter().any(|n| self.poisoned.contains(&n.name)) {
                    return;
                }
                let ns: Vec<String> = names.iter().map(|n| n.name.clone()).collect();
                if let Err(e) = self.ws.target(*kind, &ns) {
                    let span = e.arg.map_or(*kind_span, |k| names[k].span);
                    self.err(span, e.message);
                    return;
                }
                let line = self.line(*kind_span);
                self.ws.verifies.push(VerifyItem { kind: *kind, names: ns, line });
            }
            Decl::Metric { name, sort, entries } => {
                if !self.fresh(self.objects.contains(&name.name), "structure", name) {
                    return;
                }
                self.objects.insert(name.name.clone());
                let Some(x) = self.sort(sort) else { return };
                let mut fam = Vec::new();
                for e in entries {
                    match self.ws.binary.get(&e.rel.name) {
                        Some(r) if r.dom() == &x && r.cod() == &x => fam.push((e.value.value, r.clone())),
                        Some(r) => {
                            let msg = format!("`{}` is a relation {} -> {}, expected an endorelation on {x}", e.rel.name, r.dom(), r.cod());
                            self.err(e.rel.span, msg);
                            return;
                        }
                        None => {
                            if !self.poisoned.contains(&e.rel.name) {
                                self.err(e.rel.span, format!("no binary relation named `{}`", e.rel.name));
                            }
                            return;
                        }
                    }
                }
                match MetricFamily::new(&x, fam) {
                    Ok(m) => {
                        self.ws.metrics.insert(name.name.clone(), m);
                    }
                    Err(e) => {
                        self.err(name.span, e.to_string());
                        self.poisoned.insert(name.name.clone());
                    }
                }
            }
            Decl::Family { name, dim, rows, cols, entries } => {
                if !self.fresh(self.objects.contains(&name.name), "structure", name) {
                    return;
                }
                self.objects.insert(name.name.clone());
                let d = dim.value;
                let mut p = vec![vec![CMatrix::zeros(d, d); cols.len()]; rows.len()];
                let mut seen = BTreeSet::new();
                let mut ok = true;
                for e in entries {
                    let (a, b) = (e.row.value, e.col.value);
                    if a >= rows.len() || b >= cols.len() {
                        self.err(e.row.span.to(e.col.span), format!("entry ({a}, {b}) is outside the {} x {} family", rows.len(), cols.len()));
                        ok = false;
                        continue;
                    }
                    if !seen.insert((a, b)) {
                        self.err(e.row.span.to(e.col.span), format!("entry ({a}, {b}) is given twice"));
                        ok = false;
                        continue;
                    }
                    match self.matrix(&e.mat, d, d) {
                        Some(m) => p[a][b] = m,
                        None => ok = false,
                    }
                }
                if !ok {
                    self.poisoned.insert(name.name.clone());
                    return;
                }
                let labels = |v: &[StrLit]| v.iter().map(|s| s.value.clone()).collect::<Vec<_>>();
                match ProjectionFamily::new(d, labels(rows), labels(cols), p) {
                    Ok(f) => {
                        self.ws.families.insert(name.name.clone(), f);
                    }
                    Err(e) => {
                        self.err(name.span, e.to_string());
                        self.poisoned.insert(name.name.clone());
                    }
                }
            }
            Decl::Graph { name, vertices, edges } => {
                if !self.fresh(self.objects.contains(&name.name), "structure", name) {
                    return;
                }
                self.objects.insert(name.name.clone());
                let labels: Vec<String> = vertices.iter().map(|s| s.value.clone()).collect();
                let es: Vec<(usize, usize)> = edges.iter().map(|(a, b)| (a.value, b.value)).collect();
                match SimpleGraph::new(labels, &es) {
                    Ok(g) => {
                        self.ws.graphs.insert(name.name.clone(), g);
                    }
                    Err(e) => {
                        self.err(name.span, e.to_string());
                        self.poisoned.insert(name.name.clone());
                    }
                }
            }
            Decl::Group { name, elements, body } => {
                let taken = self.objects.contains(&name.name) || self.ws.qsets.contains_key(&name.name);
                if !self.fresh(taken, "structure", name) {
                    return;
                }
                self.objects.insert(name.name.clone());
                let labels: Vec<String> = elements.iter().map(|s| s.value.clone()).collect();
                let n = labels.len();
                let g = match body {
                    GroupBody::Table { table, unit } => {
                        let t: Vec<Vec<usize>> = table.iter().map(|r| r.iter().map(|i| i.value).collect()).collect();
                        lift_monoid(&name.name, &labels, &t, unit.value)
                    }
                    GroupBody::Irreps(irreps) => {
                        let mut reps = Vec::new();
                        for (ms, span) in irreps {
                            if ms.len() != n {
                                self.err(*span, format!("an irrep needs one matrix per element, {n} expected, {} given", ms.len()));
                                self.poisoned.insert(name.name.clone());
                                return;
                            }
                            let dim = ms[0].shape().0;
                            let mats: Vec<Option<CMatrix>> = ms.iter().map(|m| self.matrix(m, dim, dim)).collect();
                            let Some(mats) = mats.into_iter().collect::<Option<Vec<_>>>() else {
                                self.poisoned.insert(name.name.clone());
                                return;
                            };
                            reps.push(Irrep { dim, matrices: mats });
                        }
                        let data = IrrepData { group_order: n, elements: labels, irreps: reps };
                        dual_group_named(&data, &name.name)
                    }
                };
                match g {
                    Ok(g) => {
                        self.ws.qsets.insert(name.name.clone(), g.set.clone());
                        self.ws.groups.insert(name.name.clone(), g);
                    }
                    Err(e) => {
                        self.err(name.span, e.to_string());
                        self.poisoned.insert(name.name.clone());
                    }
                }
            }
        }
    }

    fn binary_blocks(&mut self, x: &QSet, y: &QSet, blocks: &[BlockEntry]) -> Option<Relation> {
        let (n, m) = (x.num_atoms(), y.num_atoms());
        self.relation(x, y, blocks, |idx| match idx {
            [i, j] if *i < n && *j < m => Ok((*i, *j)),
            [i, j] => Err(format!("block ({i}, {j}) is out of range, the sorts have {n} and {m} atoms")),
            _ => Err("a binary block has two indices".to_string()),
        })
    }

    fn bind(&mut self, scope: &mut Scope, v: &Ident, sort: QSet) {
        if scope.bound.iter().any(|(w, _)| *w == v.name) {
            self.err(v.span, format!("variable `{}` is already bound", v.name));
            scope.ok = false;
        }
        scope.binders.push((v.name.clone(), v.span));
        scope.bound.push((v.name.clone(), sort));
    }

    fn formula(&mut self, f: &FormulaExpr, scope: &mut Scope) -> Option<Formula> {
        match f {
            FormulaExpr::Const(true, _) => Some(Formula::Top),
            FormulaExpr::Const(false, _) => Some(Formula::Bottom),
            FormulaExpr::Not(a, _) => Some(Formula::not(self.formula(a, scope)?)),
            FormulaExpr::Bin(op, a, b) => {
                let (x, y) = (self.formula(a, scope), self.formula(b, scope));
                let (x, y) = (x?, y?);
                Some(match op {
                    BinOp::And => Formula::and(x, y),
                    BinOp::Or => Formula::or(x, y),
                    BinOp::Implies => Formula::implies(x, y),
                    BinOp::Iff => Formula::iff(x, y),
                    BinOp::Sasaki => Formula::sasaki(x, y),
                })
            }
            FormulaExpr::Quant { q, var, dvar, sort, body, .. } => {
                let s = self.sort(sort)?;
                let depth = scope.bound.len();
                self.bind(scope, var, s.clone());
                if let Some(d) = dvar {
                    if d.name == var.name {
                        self.err(d.span, format!("the two names of a diagonal pair must differ, both are `{}`", d.name));
                        scope.ok = false;
                    }
                    self.bind(scope, d, s.dual());
                }
                let b = self.formula(body, scope);
                scope.bound.truncate(depth);
                let b = b?;
                Some(match (q, dvar) {
                    (Quant::Forall, None) => Formula::forall(&var.name, &s, b),
                    (Quant::Exists, None) => Formula::exists(&var.name, &s, b),
                    (Quant::Forall, Some(d)) => Formula::forall_diag(&var.name, &d.name, &s, b),
                    (Quant::Exists, Some(d)) => Formula::exists_diag(&var.name, &d.name, &s, b),
                })
            }
            FormulaExpr::Atom { conj, pred, args, span } => {
                let (p, sorts) = match pred {
                    PredRef::Named(i) => match self.ws.env.pred(&i.name, *conj) {
                        Ok(info) => (Pred::Named(i.name.clone()), info.sorts),
                        Err(_) => {
                            if !self.poisoned.contains(&i.name) {
                                self.err(i.span, format!("unknown relation or function `{}`", i.name));
                            }
                            return None;
                        }
                    },
                    PredRef::Eq(s) => {
                        let q = self.sort(s)?;
                        let sorts = if *conj { vec![q.dual(), q.clone()] } else { vec![q.clone(), q.dual()] };
                        (Pred::Eq(q), sorts)
                    }
                };
                if args.len() != sorts.len() {
                    let head = match pred {
                        PredRef::Named(i) => format!("`{}`", i.name),
                        PredRef::Eq(s) => format!("E[{}]", print::sort(s)),
                    };
                    self.err(*span, format!("{head} takes {} arguments, given {}", sorts.len(), args.len()));
                    return None;
                }
                let mut out = Vec::with_capacity(args.len());
                let mut ok = true;
                for (a, s) in args.iter().zip(&sorts) {
                    match self.term(a, s, scope) {
                        Some(t) => out.push(t),
                        None => ok = false,
                    }
                }
                if !ok {
                    return None;
                }
                let atom = Formula::Atomic { pred: p, conj: *conj, args: out };
                let mut seen: Vec<&str> = Vec::new();
                if let Formula::Atomic { args, .. } = &atom {
                    for v in args.iter().flat_map(Term::vars) {
                        if seen.contains(&v) {
                            let d = Diagnostic::error(self.src, *span, format!("variable `{v}` occurs more than once in atomic formula `{atom}`"))
                                .with_hint(NONDUP_HINT);
                            self.diags.push(d);
                            return None;
                        }
                        seen.push(v);
                    }
                }
                Some(atom)
            }
        }
    }

    /// Resolves `t` and checks it has sort `want`.
    fn term(&mut self, t: &TermExpr, want: &QSet, scope: &mut Scope) -> Option<Term> {
        match t {
            TermExpr::Name(i) => {
                if let Some(s) = scope.lookup(&i.name) {
                    if s != want {
                        let msg = format!("variable `{}` has sort {s} but sort {want} is expected here", i.name);
                        self.err(i.span, msg);
                        return None;
                    }
                    return Some(Term::var(&i.name));
                }
                if self.ws.env.func(&i.name).is_some_and(|f| f.args.is_empty()) {
                    return self.app(&i.name, i.span, false, &[], want, scope);
                }
                scope.free.push((i.name.clone(), want.clone(), i.span));
                Some(Term::var(&i.name))
            }
            TermExpr::App { head, args, .. } => self.app(&head.name, head.span, false, args, want, scope),
            TermExpr::Conj(inner, span) => match &**inner {
                TermExpr::Conj(t2, _) => self.term(t2, want, scope),
                TermExpr::App { head, args, .. } => self.app(&head.name, head.span, true, args, want, scope),
                TermExpr::Name(i) if scope.lookup(&i.name).is_none() && self.ws.env.func(&i.name).is_some_and(|f| f.args.is_empty()) => {
                    self.app(&i.name, i.span, true, &[], want, scope)
                }
                TermExpr::Name(i) => {
                    let d = Diagnostic::error(self.src, *span, format!("variable `{}` cannot be conjugated", i.name))
                        .with_hint("a variable of the dual sort is a separate name, bound for example by `forall x == xs in X`");
                    self.diags.push(d);
                    None
                }
            },
        }
    }

    fn app(&mut self, head: &str, span: Span, conj: bool, args: &[TermExpr], want: &QSet, scope: &mut Scope) -> Option<Term> {
        let info = match self.ws.env.head(head, args.len(), conj) {
            Ok(h) => h,
            Err(e) => {
                if !self.poisoned.contains(head) {
                    let msg = match e {
                        crate::logic::LogicError::UnknownSymbol(_) => format!("unknown function `{head}`"),
                        other => other.to_string(),
                    };
                    self.err(span, msg);
                }
                return None;
            }
        };
        if &info.cod != want {
            self.err(span, format!("`{head}` has sort {} but sort {want} is expected here", info.cod));
            return None;
        }
        let mut out = Vec::with_capacity(args.len());
        let mut ok = true;
        for (a, s) in args.iter().zip(&info.args) {
            match self.term(a, s, scope) {
                Some(t) => out.push(t),
                None => ok = false,
            }
        }
        ok.then(|| Term::App { head: head.to_string(), conj, args: out })
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_workspace;
    use super::*;

    fn load(text: &str) -> Result<Workspace, Vec<Diagnostic>> {
        let src = Source::new(text);
        let ast = parse_workspace(&src)?;
        resolve(&src, &ast)
    }

    const GRAPH: &str = r#"
qset X { atoms = [2] }
rel R : X -> X { block (0, 0) = [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]] }
formula refl := forall x == xs in X . R(x, xs)
assert refl
verify graph R
"#;

    #[test]
    fn graph_workspace() {
        let w = load(GRAPH).unwrap();
        assert_eq!(w.qsets["X"].atom_dims(), &[2]);
        let f = w.formula("refl").unwrap();
        assert!(f.context.is_empty());
        assert!(crate::logic::Interpreter::new(&w.env).truth(&f.formula).unwrap());
        let rep = w.verify(VerifyKind::Graph, &["R".to_string()]).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn wrong_matrix_shape() {
        let text = "qset X { atoms = [2] }\nrel R : (X, X*) { block (0,0) = [[[ [1,0],[0,0] ],[ [0,0],[1,0] ]]] }";
        let e = load(text).unwrap_err();
        assert_eq!(e.len(), 1);
        assert!(e[0].message.contains("expected 1 x 4"), "{}", e[0].message);
        assert_eq!((e[0].start.line, e[0].start.col), (2, 34));
    }

    #[test]
    fn nonduplication_reported() {
        let text = "qset X { atoms = [2] }\nrel R : (X, X) { }\nformula bad := forall x in X . R(x, x)";
        let e = load(text).unwrap_err();
        assert!(e[0].message.contains("`x`"));
        assert!(e[0].hint.is_some());
    }

    #[test]
    fn sort_errors() {
        let text = "qset X { atoms = [2] }\nqset Y { atoms = [1] }\nrel R : X -> Y { }\nformula f := forall x in X . R(x, x)";
        let e = load(text).unwrap_err();
        assert!(e[0].message.contains("sort Y*"), "{}", e[0].message);
        let text = "qset X { atoms = [2] }\nformula f := Q(x)\nverify graph S";
        let e = load(text).unwrap_err();
        assert_eq!(e.len(), 2);
        let e = load("qset X { atoms = [2] }\nqset X { atoms = [1] }").unwrap_err();
        assert!(e[0].message.contains("declared twice"));
    }

    #[test]
    fn free_variables_and_constants() {
        let text = "qset A { classical = [\"a\", \"b\"] }\nconst c : A { block (1) = [[[[1, 0]]]] }\nrel P : (A) { block (1) = [[[[1, 0]]]] }\nformula f := P(c) and P(y)\nformula g := P(c)";
        let w = load(text).unwrap();
        assert_eq!(w.formula("f").unwrap().context.len(), 1);
        let g = &w.formula("g").unwrap().formula;
        assert!(crate::logic::Interpreter::new(&w.env).truth(g).unwrap());
    }
}
