//! Ordinary finite structures, their lifts to quantum sets, and brute-force evaluation.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::logic::{Env, Formula, LogicError, Pred, Term};
use crate::qset::QSet;
use crate::relation::Relation;
use crate::Subspace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicalError {
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("sort {0} is not classical")]
    NonClassicalSort(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalRel {
    pub sorts: Vec<String>,
    pub tuples: BTreeSet<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalFn {
    pub args: Vec<String>,
    pub cod: String,
    /// Value for every argument tuple, indexed lexicographically.
    pub table: Vec<usize>,
}

/// A many-sorted structure over finite sets. Elements are indices into label lists.
#[derive(Debug, Clone, Default)]
pub struct ClassicalStructure {
    pub sets: BTreeMap<String, Vec<String>>,
    pub relations: BTreeMap<String, ClassicalRel>,
    pub functions: BTreeMap<String, ClassicalFn>,
}

/// Quantum sets and symbols obtained by lifting a classical structure.
#[derive(Debug, Clone)]
pub struct Lifted {
    pub sets: BTreeMap<String, QSet>,
    pub env: Env,
}

impl Lifted {
    pub fn set(&self, name: &str) -> &QSet {
        &self.sets[name]
    }
}

impl ClassicalStructure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_set<S: AsRef<str>>(&mut self, name: &str, labels: &[S]) -> &mut Self {
        self.sets
            .insert(name.into(), labels.iter().map(|l| l.as_ref().to_string()).collect());
        self
    }

    pub fn add_rel(&mut self, name: &str, sorts: &[&str], tuples: &[Vec<usize>]) -> &mut Self {
        self.relations.insert(
            name.into(),
            ClassicalRel {
                sorts: sorts.iter().map(|s| s.to_string()).collect(),
                tuples: tuples.iter().cloned().collect(),
            },
        );
        self
    }

    pub fn add_fn(&mut self, name: &str, args: &[&str], cod: &str, table: &[usize]) -> &mut Self {
        self.functions.insert(
            name.into(),
            ClassicalFn {
                args: args.iter().map(|s| s.to_string()).collect(),
                cod: cod.into(),
                table: table.to_vec(),
            },
        );
        self
    }

    fn size(&self, set: &str) -> Result<usize, ClassicalError> {
        self.sets
            .get(set)
            .map(|l| l.len())
            .ok_or_else(|| ClassicalError::InvariantViolation(format!("unknown set `{set}`")))
    }

    pub fn validate(&self) -> Result<(), ClassicalError> {
        for (n, r) in &self.relations {
            let sizes = r.sorts.iter().map(|s| self.size(s)).collect::<Result<Vec<_>, _>>()?;
            for t in &r.tuples {
                if t.len() != sizes.len() || t.iter().zip(&sizes).any(|(a, s)| a >= s) {
                    return Err(ClassicalError::InvariantViolation(format!(
                        "tuple {t:?} of `{n}` is out of range"
                    )));
                }
            }
        }
        for (n, f) in &self.functions {
            let sizes = f.args.iter().map(|s| self.size(s)).collect::<Result<Vec<_>, _>>()?;
            let cod = self.size(&f.cod)?;
            let total: usize = sizes.iter().product();
            if f.table.len() != total || f.table.iter().any(|&v| v >= cod) {
                return Err(ClassicalError::InvariantViolation(format!(
                    "function `{n}` is not a total map into `{}`",
                    f.cod
                )));
            }
        }
        Ok(())
    }

    /// Lifts sets to classical quantum sets and symbols to relations with rank-one blocks.
    pub fn lift(&self) -> Result<Lifted, ClassicalError> {
        self.validate()?;
        let mut sets = BTreeMap::new();
        for (n, labels) in &self.sets {
            let q = QSet::classical(n, labels)
                .map_err(|e| ClassicalError::InvariantViolation(e.to_string()))?;
            sets.insert(n.clone(), q);
        }
        let sort = |n: &String| sets[n].clone();
        let mut env = Env::new();
        let unit = QSet::unit();
        for (n, r) in &self.relations {
            let sorts: Vec<QSet> = r.sorts.iter().map(sort).collect();
            let dom = QSet::product_all(&sorts);
            let mut rel = Relation::bottom(&dom, &unit);
            for t in &r.tuples {
                rel.set_block(dom.join_index(t), 0, Subspace::full(1, 1))
                    .expect("one-dimensional block");
            }
            env.add_rel(n, sorts, rel)?;
        }
        for (n, f) in &self.functions {
            let args: Vec<QSet> = f.args.iter().map(sort).collect();
            let cod = sort(&f.cod);
            let dom = QSet::product_all(&args);
            let mut rel = Relation::bottom(&dom, &cod);
            for (i, &v) in f.table.iter().enumerate() {
                rel.set_block(i, v, Subspace::full(1, 1)).expect("one-dimensional block");
            }
            env.add_fn(n, args, cod, rel)?;
        }
        Ok(Lifted { sets, env })
    }

    /// Tarski evaluation of a sentence over lifted sorts, by enumeration.
    pub fn fol_eval(&self, lifted: &Lifted, f: &Formula) -> Result<bool, ClassicalError> {
        let free = f.free_vars();
        if !free.is_empty() {
            return Err(LogicError::HasFreeVariables(free).into());
        }
        self.eval(lifted, f, &mut Vec::new())
    }

    fn eval(
        &self,
        lifted: &Lifted,
        f: &Formula,
        asg: &mut Vec<(String, usize)>,
    ) -> Result<bool, ClassicalError> {
        Ok(match f {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Atomic { pred, args, .. } => {
                let vals = args
                    .iter()
                    .map(|a| self.term(lifted, a, asg))
                    .collect::<Result<Vec<_>, _>>()?;
                match pred {
                    Pred::Eq(_) => vals[0] == vals[1],
                    Pred::Named(n) => self.holds(n, &vals)?,
                }
            }
            Formula::Not(a) => !self.eval(lifted, a, asg)?,
            Formula::And(a, b) => self.eval(lifted, a, asg)? && self.eval(lifted, b, asg)?,
            Formula::Or(a, b) => self.eval(lifted, a, asg)? || self.eval(lifted, b, asg)?,
            Formula::Implies(a, b) => !self.eval(lifted, a, asg)? || self.eval(lifted, b, asg)?,
            Formula::Iff(a, b) => self.eval(lifted, a, asg)? == self.eval(lifted, b, asg)?,
            Formula::Sasaki(a, b) => self.eval(lifted, a, asg)? && self.eval(lifted, b, asg)?,
            Formula::Forall { var, sort, body } | Formula::Exists { var, sort, body } => {
                let n = elements(sort)?;
                let universal = matches!(f, Formula::Forall { .. });
                let mut acc = universal;
                for e in 0..n {
                    asg.push((var.clone(), e));
                    let v = self.eval(lifted, body, asg);
                    asg.pop();
                    if v? != universal {
                        acc = !universal;
                        break;
                    }
                }
                acc
            }
            Formula::ForallDiag { var, dvar, sort, body }
            | Formula::ExistsDiag { var, dvar, sort, body } => {
                let n = elements(sort)?;
                let universal = matches!(f, Formula::ForallDiag { .. });
                let mut acc = universal;
                for e in 0..n {
                    asg.push((var.clone(), e));
                    asg.push((dvar.clone(), e));
                    let v = self.eval(lifted, body, asg);
                    asg.pop();
                    asg.pop();
                    if v? != universal {
                        acc = !universal;
                        break;
                    }
                }
                acc
            }
        })
    }

    fn term(&self, lifted: &Lifted, t: &Term, asg: &[(String, usize)]) -> Result<usize, ClassicalError> {
        match t {
            Term::Var(v) => asg
                .iter()
                .rev()
                .find(|(w, _)| w == v)
                .map(|&(_, e)| e)
                .ok_or_else(|| LogicError::FreeVariableNotInContext(v.clone()).into()),
            Term::App { head, args, .. } => {
                let vals = args
                    .iter()
                    .map(|a| self.term(lifted, a, asg))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(f) = self.functions.get(head) {
                    let sizes = f.args.iter().map(|s| self.size(s)).collect::<Result<Vec<_>, _>>()?;
                    let idx = vals.iter().zip(&sizes).fold(0, |acc, (&v, &s)| acc * s + v);
                    return Ok(f.table[idx]);
                }
                let r = self
                    .relations
                    .get(head)
                    .ok_or_else(|| LogicError::UnknownSymbol(head.clone()))?;
                let hits: Vec<usize> = r
                    .tuples
                    .iter()
                    .filter(|t| t.len() == vals.len() + 1 && t[..vals.len()] == vals[..])
                    .map(|t| t[vals.len()])
                    .collect();
                match hits.as_slice() {
                    [y] => Ok(*y),
                    _ => Err(ClassicalError::InvariantViolation(format!(
                        "`{head}` is not a function graph at {vals:?}"
                    ))),
                }
            }
        }
    }

    fn holds(&self, name: &str, vals: &[usize]) -> Result<bool, ClassicalError> {
        if let Some(r) = self.relations.get(name) {
            return Ok(r.tuples.contains(vals));
        }
        if let Some(f) = self.functions.get(name) {
            let (xs, y) = vals.split_at(vals.len() - 1);
            let sizes = f.args.iter().map(|s| self.size(s)).collect::<Result<Vec<_>, _>>()?;
            let idx = xs.iter().zip(&sizes).fold(0, |acc, (&v, &s)| acc * s + v);
            return Ok(f.table[idx] == y[0]);
        }
        Err(LogicError::UnknownSymbol(name.to_string()).into())
    }
}

fn elements(sort: &QSet) -> Result<usize, ClassicalError> {
    if !sort.is_classical() {
        return Err(ClassicalError::NonClassicalSort(sort.to_string()));
    }
    Ok(sort.num_atoms())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Interpreter;

    fn ab(r: &[Vec<usize>]) -> (ClassicalStructure, Lifted) {
        let mut cs = ClassicalStructure::new();
        cs.add_set("A", &["a", "b"]).add_rel("r", &["A", "A"], r);
        let l = cs.lift().unwrap();
        (cs, l)
    }

    #[test]
    fn lift_examples() {
        let (_, l) = ab(&[vec![0, 1]]);
        let r = &l.env.rel("r").unwrap().rel;
        assert_eq!(r.blocks().filter(|(_, _, b)| !b.is_zero()).count(), 1);
        let (_, l0) = ab(&[]);
        assert!(l0.env.rel("r").unwrap().rel.is_bottom());
        let mut cs = ClassicalStructure::new();
        cs.add_set("A", &["a", "b"]).add_fn("id", &["A"], "A", &[0, 1]);
        let l = cs.lift().unwrap();
        let a = l.set("A").clone();
        assert!(l.env.func("id").unwrap().rel.approx_eq(&Relation::identity(&a)));
    }

    #[test]
    fn fol_examples() {
        let (cs, l) = ab(&[vec![0, 0], vec![1, 0]]);
        let a = l.set("A").clone();
        let f = Formula::forall("x", &a, Formula::exists("y", &a, Formula::rel("r", &["x", "y"])));
        assert!(cs.fol_eval(&l, &f).unwrap());
        let (cs, l) = ab(&[vec![0, 1]]);
        // brute force also accepts duplicating formulas
        let xx = Formula::exists("x", &a, Formula::rel("r", &["x", "x"]));
        assert!(!cs.fol_eval(&l, &xx).unwrap());
    }

    #[test]
    fn interpreter_agrees_on_forall_exists() {
        let (cs, l) = ab(&[vec![0, 0]]);
        let a = l.set("A").clone();
        let f = Formula::forall("x", &a, Formula::exists("y", &a, Formula::rel("r", &["x", "y"])));
        assert!(!cs.fol_eval(&l, &f).unwrap());
        assert!(!Interpreter::new(&l.env).truth(&f).unwrap());
    }
}
