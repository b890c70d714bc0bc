//! Relation and function symbols available to formulas.

use std::collections::BTreeMap;

use super::LogicError;
use crate::qset::QSet;
use crate::relation::Relation;

#[derive(Debug, Clone)]
pub struct RelSym {
    pub sorts: Vec<QSet>,
    pub rel: Relation,
}

#[derive(Debug, Clone)]
pub struct FnSym {
    pub args: Vec<QSet>,
    pub cod: QSet,
    /// The function as a binary relation from the product of `args` to `cod`.
    pub rel: Relation,
    /// Its graph, of arity (args.., cod*).
    pub graph: Relation,
}

/// Named symbols. Ordered maps keep iteration deterministic.
#[derive(Debug, Clone, Default)]
pub struct Env {
    rels: BTreeMap<String, RelSym>,
    fns: BTreeMap<String, FnSym>,
}

/// A resolved predicate: argument sorts and the relation of that arity.
pub struct PredInfo {
    pub sorts: Vec<QSet>,
    pub rel: Relation,
}

/// A resolved term head: a function from the product of `args` to `cod`.
pub struct HeadInfo {
    pub args: Vec<QSet>,
    pub cod: QSet,
    pub rel: Relation,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_fresh(&self, name: &str) -> Result<(), LogicError> {
        if self.rels.contains_key(name) || self.fns.contains_key(name) {
            return Err(LogicError::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    /// Adds a relation of arity `sorts`.
    pub fn add_rel(&mut self, name: &str, sorts: Vec<QSet>, rel: Relation) -> Result<(), LogicError> {
        self.check_fresh(name)?;
        let dom = QSet::product_all(&sorts);
        if rel.dom() != &dom || !rel.cod().is_unit() {
            return Err(LogicError::Sort(format!(
                "relation `{name}` is declared with arity ({}) but has type {} -> {}",
                sorts.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "),
                rel.dom(),
                rel.cod()
            )));
        }
        self.rels.insert(name.to_string(), RelSym { sorts, rel });
        Ok(())
    }

    /// Adds a function symbol given as a binary relation `args -> cod`.
    pub fn add_fn(&mut self, name: &str, args: Vec<QSet>, cod: QSet, rel: Relation) -> Result<(), LogicError> {
        self.check_fresh(name)?;
        let dom = QSet::product_all(&args);
        if rel.dom() != &dom || rel.cod() != &cod {
            return Err(LogicError::Sort(format!(
                "function `{name}` is declared {} -> {} but has type {} -> {}",
                dom,
                cod,
                rel.dom(),
                rel.cod()
            )));
        }
        let graph = rel.bend()?;
        self.fns.insert(name.to_string(), FnSym { args, cod, rel, graph });
        Ok(())
    }

    pub fn rel(&self, name: &str) -> Option<&RelSym> {
        self.rels.get(name)
    }

    pub fn func(&self, name: &str) -> Option<&FnSym> {
        self.fns.get(name)
    }

    pub fn has(&self, name: &str) -> bool {
        self.rels.contains_key(name) || self.fns.contains_key(name)
    }

    pub fn rel_names(&self) -> impl Iterator<Item = &String> {
        self.rels.keys()
    }

    pub fn fn_names(&self) -> impl Iterator<Item = &String> {
        self.fns.keys()
    }

    /// Resolves an atomic predicate. A function name denotes its graph.
    pub fn pred(&self, name: &str, conj: bool) -> Result<PredInfo, LogicError> {
        let (sorts, rel) = if let Some(r) = self.rels.get(name) {
            (r.sorts.clone(), r.rel.clone())
        } else if let Some(f) = self.fns.get(name) {
            let mut s = f.args.clone();
            s.push(f.cod.dual());
            (s, f.graph.clone())
        } else {
            return Err(LogicError::UnknownSymbol(name.to_string()));
        };
        Ok(conjugate_pred(sorts, rel, conj))
    }

    /// Resolves a term head applied to `nargs` arguments. A relation of arity
    /// (X_1..X_m, Y*) used as a head denotes the unbent function X_1 x .. x X_m -> Y.
    pub fn head(&self, name: &str, nargs: usize, conj: bool) -> Result<HeadInfo, LogicError> {
        let info = if let Some(f) = self.fns.get(name) {
            if f.args.len() != nargs {
                return Err(LogicError::Sort(format!(
                    "function `{name}` takes {} arguments, given {nargs}",
                    f.args.len()
                )));
            }
            HeadInfo {
                args: f.args.clone(),
                cod: f.cod.clone(),
                rel: f.rel.clone(),
            }
        } else if let Some(r) = self.rels.get(name) {
            if nargs >= r.sorts.len() {
                return Err(LogicError::Sort(format!(
                    "relation `{name}` of arity {} cannot be applied to {nargs} arguments as a term",
                    r.sorts.len()
                )));
            }
            let args = r.sorts[..nargs].to_vec();
            let cod = QSet::product_all(&r.sorts[nargs..]).dual();
            let rel = r.rel.unbend(&QSet::product_all(&args), &cod)?;
            HeadInfo { args, cod, rel }
        } else {
            return Err(LogicError::UnknownSymbol(name.to_string()));
        };
        Ok(if conj {
            HeadInfo {
                args: info.args.iter().map(QSet::dual).collect(),
                cod: info.cod.dual(),
                rel: info.rel.conjugate(),
            }
        } else {
            info
        })
    }
}

pub(crate) fn conjugate_pred(sorts: Vec<QSet>, rel: Relation, conj: bool) -> PredInfo {
    if conj {
        PredInfo {
            sorts: sorts.iter().map(QSet::dual).collect(),
            rel: rel.conjugate(),
        }
    } else {
        PredInfo { sorts, rel }
    }
}
