//! Quantum sets: finite lists of atoms with duals and Cartesian products.
//!
//! A quantum set is stored as a product of factors, each a named base set
//! possibly dualized. Products concatenate factor lists, so they associate
//! and the unit set is the empty product.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QSetError {
    #[error("duplicate atom label `{0}`")]
    DuplicateLabel(String),
    #[error("atom `{0}` has dimension zero")]
    ZeroDimension(String),
}

/// One atom of a quantum set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub label: String,
    pub dim: usize,
    /// Odd when the atom belongs to a dual set.
    pub dual_depth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSet {
    pub name: String,
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub classical: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Factor {
    base: Arc<BaseSet>,
    dual: bool,
}

/// Where a quantum set came from, recovered from its factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Unit,
    Classical(Vec<String>),
    Dual(QSet),
    Product(QSet, QSet),
    Opaque,
}

#[derive(Debug, Clone)]
pub struct QSet {
    factors: Vec<Factor>,
    dims: Arc<Vec<usize>>,
}

impl PartialEq for QSet {
    fn eq(&self, other: &Self) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| {
                a.dual == b.dual && (Arc::ptr_eq(&a.base, &b.base) || a.base == b.base)
            })
    }
}

impl Eq for QSet {}

fn product_dims(factors: &[Factor]) -> Vec<usize> {
    let mut dims = vec![1usize];
    for f in factors {
        let mut next = Vec::with_capacity(dims.len() * f.base.dims.len());
        for &d in &dims {
            for &e in &f.base.dims {
                next.push(d * e);
            }
        }
        dims = next;
    }
    dims
}

impl QSet {
    fn from_factors(factors: Vec<Factor>) -> Self {
        let dims = Arc::new(product_dims(&factors));
        QSet { factors, dims }
    }

    fn base(base: BaseSet) -> Result<Self, QSetError> {
        for (i, l) in base.labels.iter().enumerate() {
            if base.labels[..i].contains(l) {
                return Err(QSetError::DuplicateLabel(l.clone()));
            }
            if base.dims[i] == 0 {
                return Err(QSetError::ZeroDimension(l.clone()));
            }
        }
        Ok(Self::from_factors(vec![Factor {
            base: Arc::new(base),
            dual: false,
        }]))
    }

    /// Classical set `A: one-dimensional atom per label.
    pub fn classical<S: AsRef<str>>(name: &str, labels: &[S]) -> Result<Self, QSetError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let dims = vec![1; labels.len()];
        Self::base(BaseSet {
            name: name.to_string(),
            labels,
            dims,
            classical: true,
        })
    }

    /// Quantum set with labelled atoms of given dimensions.
    pub fn atoms<S: AsRef<str>>(name: &str, atoms: &[(S, usize)]) -> Result<Self, QSetError> {
        Self::base(BaseSet {
            name: name.to_string(),
            labels: atoms.iter().map(|(l, _)| l.as_ref().to_string()).collect(),
            dims: atoms.iter().map(|&(_, d)| d).collect(),
            classical: false,
        })
    }

    /// Quantum set with atoms labelled by position.
    pub fn from_dims(name: &str, dims: &[usize]) -> Result<Self, QSetError> {
        let atoms: Vec<(String, usize)> =
            dims.iter().enumerate().map(|(i, &d)| (i.to_string(), d)).collect();
        Self::atoms(name, &atoms)
    }

    /// The unit set 1: one atom of dimension one.
    pub fn unit() -> Self {
        Self::from_factors(Vec::new())
    }

    pub fn product(&self, other: &QSet) -> QSet {
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().cloned());
        Self::from_factors(f)
    }

    /// Left-associated product of a list; the unit for an empty list.
    pub fn product_all(sets: &[QSet]) -> QSet {
        let f = sets.iter().flat_map(|s| s.factors.iter().cloned()).collect();
        Self::from_factors(f)
    }

    pub fn dual(&self) -> QSet {
        let f = self
            .factors
            .iter()
            .map(|f| Factor {
                base: f.base.clone(),
                dual: !f.dual,
            })
            .collect();
        QSet {
            factors: f,
            dims: self.dims.clone(),
        }
    }

    pub fn num_atoms(&self) -> usize {
        self.dims.len()
    }

    pub fn atom_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    /// Sum of atom dimensions.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Every atom is one-dimensional.
    pub fn is_classical(&self) -> bool {
        self.dims.iter().all(|&d| d == 1)
    }

    /// Number of product factors; the unit has none.
    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// The `k`-th product factor as a quantum set.
    pub fn factor(&self, k: usize) -> QSet {
        Self::from_factors(vec![self.factors[k].clone()])
    }

    pub fn factor_list(&self) -> Vec<QSet> {
        (0..self.factors.len()).map(|k| self.factor(k)).collect()
    }

    /// Splits an atom index into one atom index per factor.
    pub fn split_index(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for k in (0..self.factors.len()).rev() {
            let n = self.factors[k].base.dims.len();
            out[k] = i % n;
            i /= n;
        }
        out
    }

    /// Inverse of [`QSet::split_index`].
    pub fn join_index(&self, parts: &[usize]) -> usize {
        self.factors
            .iter()
            .zip(parts)
            .fold(0, |acc, (f, &p)| acc * f.base.dims.len() + p)
    }

    pub fn atom(&self, i: usize) -> Atom {
        let parts = self.split_index(i);
        let labels: Vec<String> = self
            .factors
            .iter()
            .zip(&parts)
            .map(|(f, &p)| {
                let l = &f.base.labels[p];
                if f.dual && self.factors.len() > 1 {
                    format!("{l}*")
                } else {
                    l.clone()
                }
            })
            .collect();
        let label = match labels.len() {
            0 => "()".to_string(),
            1 => labels.into_iter().next().unwrap(),
            _ => format!("({})", labels.join(",")),
        };
        let dual_depth = match self.factors.as_slice() {
            [f] => f.dual as u32,
            _ => 0,
        };
        Atom {
            label,
            dim: self.dims[i],
            dual_depth,
        }
    }

    pub fn atoms_list(&self) -> Vec<Atom> {
        (0..self.num_atoms()).map(|i| self.atom(i)).collect()
    }

    /// Index of the atom with the given label.
    pub fn atom_index(&self, label: &str) -> Option<usize> {
        (0..self.num_atoms()).find(|&i| self.atom(i).label == label)
    }

    pub fn provenance(&self) -> Provenance {
        match self.factors.as_slice() {
            [] => Provenance::Unit,
            [f] if f.dual => Provenance::Dual(self.dual()),
            [f] if f.base.classical => Provenance::Classical(f.base.labels.clone()),
            [_] => Provenance::Opaque,
            [first, rest @ ..] => Provenance::Product(
                Self::from_factors(vec![first.clone()]),
                Self::from_factors(rest.to_vec()),
            ),
        }
    }
}

impl fmt::Display for QSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, fac) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " >< ")?;
            }
            write!(f, "{}{}", fac.base.name, if fac.dual { "*" } else { "" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        let a = QSet::classical("A", &["a", "b"]).unwrap();
        assert_eq!(a.atom_dims(), &[1, 1]);
        let x = QSet::from_dims("X", &[2]).unwrap();
        let xd = x.dual();
        assert_eq!((xd.num_atoms(), xd.dim(0), xd.atom(0).dual_depth), (1, 2, 1));
        assert_eq!(xd.dual(), x);
        let y = QSet::from_dims("Y", &[3]).unwrap();
        assert_eq!(x.product(&y).atom_dims(), &[6]);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            QSet::classical("A", &["a", "a"]),
            Err(QSetError::DuplicateLabel("a".into()))
        );
        assert!(matches!(
            QSet::atoms("X", &[("p", 0)]),
            Err(QSetError::ZeroDimension(_))
        ));
    }

    #[test]
    fn product_order_and_unit() {
        let x = QSet::from_dims("X", &[1, 2]).unwrap();
        let y = QSet::from_dims("Y", &[3, 4]).unwrap();
        let p = x.product(&y);
        assert_eq!(p.atom_dims(), &[3, 4, 6, 8]);
        assert_eq!(p.split_index(2), vec![1, 0]);
        assert_eq!(p.join_index(&[1, 1]), 3);
        assert_eq!(p.atom(1).label, "(0,1)");
        let u = QSet::unit();
        assert_eq!(u.atom_dims(), &[1]);
        assert_eq!(x.product(&u), x);
        let z = QSet::from_dims("Z", &[2]).unwrap();
        assert_eq!(x.product(&y).product(&z), x.product(&y.product(&z)));
        assert_eq!(p.dual(), x.dual().product(&y.dual()));
    }

    #[test]
    fn empty_set_is_legal() {
        let e = QSet::classical::<&str>("E", &[]).unwrap();
        assert!(e.is_empty());
        let x = QSet::from_dims("X", &[2]).unwrap();
        assert!(x.product(&e).is_empty());
    }

    #[test]
    fn provenance() {
        let a = QSet::classical("A", &["a"]).unwrap();
        assert_eq!(a.provenance(), Provenance::Classical(vec!["a".into()]));
        assert_eq!(a.dual().provenance(), Provenance::Dual(a.clone()));
        assert_eq!(QSet::unit().provenance(), Provenance::Unit);
    }
}
