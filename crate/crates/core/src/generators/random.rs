//! Seeded random subspaces, projections, relations and formulas.

use nalgebra::Complex;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::logic::{Env, Formula, Pred, Term};
use crate::qset::QSet;
use crate::relation::Relation;
use crate::structures::ProjectionFamily;
use crate::subspace::orthonormalize;
use crate::{CMatrix, Subspace};

#[derive(Debug, Error)]
pub enum RandomError {
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Haar-random orthogonal projection of rank `k` on C^d.
pub fn haar_projection<R: Rng>(rng: &mut R, d: usize, k: usize) -> CMatrix {
    let q = orthonormalize(gaussian(rng, d, k.min(d)));
    &q * q.adjoint()
}

/// Haar-random unitary on C^d.
pub fn haar_unitary<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    orthonormalize(gaussian(rng, d, d))
}

/// Span of `rank` Gaussian matrices of shape `rows x cols`.
pub fn random_subspace<R: Rng>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> Result<Subspace, RandomError> {
    if rank > rows * cols {
        return Err(RandomError::BadParams(format!(
            "rank {rank} exceeds ambient dimension {}",
            rows * cols
        )));
    }
    let gens: Vec<CMatrix> = (0..rank).map(|_| gaussian(rng, rows, cols)).collect();
    Ok(Subspace::span(&gens, rows, cols).expect("matching shapes"))
}

/// Subspace of uniformly chosen rank, with zero and full blocks over-weighted.
pub fn random_block<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Subspace {
    let n = rows * cols;
    match rng.random_range(0..5) {
        0 => Subspace::zero(rows, cols),
        1 => Subspace::full(rows, cols),
        _ => {
            let k = rng.random_range(0..=n);
            random_subspace(rng, rows, cols, k).expect("rank within ambient")
        }
    }
}

/// Relation with independently drawn blocks.
pub fn random_relation<R: Rng>(rng: &mut R, dom: &QSet, cod: &QSet) -> Relation {
    let mut blocks = Vec::new();
    for i in 0..dom.num_atoms() {
        for j in 0..cod.num_atoms() {
            blocks.push(random_block(rng, cod.dim(j), dom.dim(i)));
        }
    }
    let mut it = blocks.into_iter();
    Relation::from_fn(dom, cod, |_, _| it.next().expect("one block per pair"))
}

/// Quantum set with `1..=max_atoms` atoms of dimension `1..=max_dim`.
pub fn random_qset<R: Rng>(rng: &mut R, name: &str, max_atoms: usize, max_dim: usize) -> QSet {
    let n = rng.random_range(1..=max_atoms.max(1));
    let dims: Vec<usize> = (0..n).map(|_| rng.random_range(1..=max_dim.max(1))).collect();
    QSet::from_dims(name, &dims).expect("positive dimensions")
}

/// Magic unitary on `C^d` with `n x n` entries: `q ⊗ perm σ + (1 - q) ⊗ perm τ` on a
/// two-dimensional corner, permutation projections on the rest, then conjugated by a
/// Haar unitary.
pub fn random_magic_unitary<R: Rng>(rng: &mut R, n: usize, d: usize) -> Result<ProjectionFamily, RandomError> {
    if n == 0 || d == 0 {
        return Err(RandomError::BadParams("magic unitary needs n >= 1 and d >= 1".into()));
    }
    let perm = |rng: &mut R| {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        p
    };
    let mut p = vec![vec![CMatrix::zeros(d, d); n]; n];
    let mut k = 0;
    while k < d {
        if k + 2 <= d && rng.random_bool(0.5) {
            let q = haar_projection(rng, 2, 1);
            let r = CMatrix::identity(2, 2) - &q;
            let (s, t) = (perm(rng), perm(rng));
            for a in 0..n {
                let mut blk = p[a][s[a]].view_mut((k, k), (2, 2)).into_owned();
                blk += &q;
                p[a][s[a]].view_mut((k, k), (2, 2)).copy_from(&blk);
                let mut blk = p[a][t[a]].view_mut((k, k), (2, 2)).into_owned();
                blk += &r;
                p[a][t[a]].view_mut((k, k), (2, 2)).copy_from(&blk);
            }
            k += 2;
        } else {
            let s = perm(rng);
            for a in 0..n {
                p[a][s[a]][(k, k)] += Complex::new(1.0, 0.0);
            }
            k += 1;
        }
    }
    let u = haar_unitary(rng, d);
    let p = p
        .into_iter()
        .map(|row| row.into_iter().map(|m| &u * m * u.adjoint()).collect())
        .collect();
    let labels: Vec<String> = (0..n).map(|k| k.to_string()).collect();
    ProjectionFamily::new(d, labels.clone(), labels, p).map_err(|e| RandomError::BadParams(e.to_string()))
}

/// Symbols available to the formula generator.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    /// Sorts that may be quantified over, together with their duals.
    pub sorts: Vec<QSet>,
    pub preds: Vec<(String, Vec<QSet>)>,
    pub fns: Vec<(String, Vec<QSet>, QSet)>,
}

impl Signature {
    /// Every relation and function of `env`, quantifying over `sorts`.
    pub fn from_env(env: &Env, sorts: &[QSet]) -> Self {
        let preds = env
            .rel_names()
            .map(|n| (n.clone(), env.rel(n).expect("listed").sorts.clone()))
            .collect();
        let fns = env
            .fn_names()
            .map(|n| {
                let f = env.func(n).expect("listed");
                (n.clone(), f.args.clone(), f.cod.clone())
            })
            .collect();
        Signature {
            sorts: sorts.to_vec(),
            preds,
            fns,
        }
    }
}

struct FormulaGen<'s, R> {
    sig: &'s Signature,
    rng: &'s mut R,
    next: usize,
}

impl<R: Rng> FormulaGen<'_, R> {
    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("v{}", self.next)
    }

    fn quant_sort(&mut self) -> QSet {
        let s = self.sig.sorts.choose(self.rng).expect("nonempty sorts").clone();
        if self.rng.random_bool(0.3) {
            s.dual()
        } else {
            s
        }
    }

    /// A term of sort `s` using only variables in `scope` outside `used`.
    fn term(&mut self, s: &QSet, scope: &[(String, QSet)], used: &mut Vec<String>, fuel: usize) -> Option<Term> {
        let vars: Vec<&String> = scope
            .iter()
            .filter(|(v, t)| t == s && !used.contains(v))
            .map(|(v, _)| v)
            .collect();
        let use_fn = fuel > 0 && self.rng.random_bool(0.25);
        if !use_fn {
            if let Some(v) = vars.choose(self.rng) {
                used.push((*v).clone());
                return Some(Term::var(v));
            }
        }
        if fuel == 0 {
            return None;
        }
        let mut heads: Vec<(String, bool, Vec<QSet>)> = Vec::new();
        for (n, args, cod) in &self.sig.fns {
            if cod == s {
                heads.push((n.clone(), false, args.clone()));
            }
            if &cod.dual() == s {
                heads.push((n.clone(), true, args.iter().map(QSet::dual).collect()));
            }
        }
        heads.shuffle(self.rng);
        for (n, conj, args) in heads {
            let mark = used.len();
            let mut ts = Vec::new();
            for a in &args {
                match self.term(a, scope, used, fuel - 1) {
                    Some(t) => ts.push(t),
                    None => break,
                }
            }
            if ts.len() == args.len() {
                return Some(if conj { Term::conj_app(&n, ts) } else { Term::app(&n, ts) });
            }
            used.truncate(mark);
        }
        vars.choose(self.rng).map(|v| {
            used.push((*v).clone());
            Term::var(v)
        })
    }

    fn atom(&mut self, scope: &[(String, QSet)]) -> Formula {
        let mut cands: Vec<(Pred, bool, Vec<QSet>)> = Vec::new();
        for (n, sorts) in &self.sig.preds {
            cands.push((Pred::Named(n.clone()), false, sorts.clone()));
            cands.push((Pred::Named(n.clone()), true, sorts.iter().map(QSet::dual).collect()));
        }
        for (n, args, cod) in &self.sig.fns {
            let mut s = args.clone();
            s.push(cod.dual());
            cands.push((Pred::Named(n.clone()), false, s.clone()));
            cands.push((Pred::Named(n.clone()), true, s.iter().map(QSet::dual).collect()));
        }
        for x in &self.sig.sorts {
            cands.push((Pred::Eq(x.clone()), false, vec![x.clone(), x.dual()]));
        }
        cands.shuffle(self.rng);
        for (pred, conj, sorts) in cands {
            let mut used = Vec::new();
            let mut args = Vec::new();
            for s in &sorts {
                match self.term(s, scope, &mut used, 1) {
                    Some(t) => args.push(t),
                    None => break,
                }
            }
            if args.len() == sorts.len() {
                return Formula::Atomic { pred, conj, args };
            }
        }
        if self.rng.random_bool(0.5) {
            Formula::Top
        } else {
            Formula::Bottom
        }
    }

    fn formula(&mut self, depth: usize, scope: &mut Vec<(String, QSet)>) -> Formula {
        if depth == 0 {
            return self.atom(scope);
        }
        let pick = if scope.is_empty() {
            self.rng.random_range(6..10)
        } else {
            self.rng.random_range(0..10)
        };
        match pick {
            0 => self.atom(scope),
            1 => Formula::not(self.formula(depth - 1, scope)),
            2..=5 => {
                let a = self.formula(depth - 1, scope);
                let b = self.formula(depth - 1, scope);
                match pick {
                    2 => Formula::and(a, b),
                    3 => Formula::or(a, b),
                    4 => Formula::implies(a, b),
                    _ => Formula::iff(a, b),
                }
            }
            6 | 7 => {
                let s = self.quant_sort();
                let v = self.fresh();
                scope.push((v.clone(), s.clone()));
                let body = self.formula(depth - 1, scope);
                scope.pop();
                if pick == 6 {
                    Formula::forall(&v, &s, body)
                } else {
                    Formula::exists(&v, &s, body)
                }
            }
            _ => {
                let s = self.sig.sorts.choose(self.rng).expect("nonempty sorts").clone();
                let (v, w) = (self.fresh(), self.fresh());
                scope.push((v.clone(), s.clone()));
                scope.push((w.clone(), s.dual()));
                let body = self.formula(depth - 1, scope);
                scope.pop();
                scope.pop();
                if pick == 8 {
                    Formula::forall_diag(&v, &w, &s, body)
                } else {
                    Formula::exists_diag(&v, &w, &s, body)
                }
            }
        }
    }
}

/// Nonduplicating sentence of depth at most `depth` over `sig`.
///
/// Never quantifies over empty sorts.
pub fn random_sentence<R: Rng>(rng: &mut R, sig: &Signature, depth: usize) -> Result<Formula, RandomError> {
    if sig.sorts.is_empty() || sig.sorts.iter().any(|s| s.num_atoms() == 0) {
        return Err(RandomError::BadParams("sentences need at least one nonempty sort, and no empty ones".into()));
    }
    random_formula(rng, sig, depth, &[])
}

/// Nonduplicating formula whose free variables lie in `scope`.
///
/// Bound variables are named `v1`, `v2`, ..; scope names must avoid that pattern.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    depth: usize,
    scope: &[(String, QSet)],
) -> Result<Formula, RandomError> {
    if sig.sorts.is_empty() || sig.sorts.iter().any(|s| s.num_atoms() == 0) {
        return Err(RandomError::BadParams("formulas need at least one nonempty sort, and no empty ones".into()));
    }
    let mut g = FormulaGen { sig, rng, next: 0 };
    Ok(g.formula(depth, &mut scope.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::nondup_check;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn projection_is_deterministic() {
        let a = haar_projection(&mut ChaCha8Rng::seed_from_u64(7), 3, 1);
        let b = haar_projection(&mut ChaCha8Rng::seed_from_u64(7), 3, 1);
        assert_eq!(a, b);
    }

    #[test]
    fn sentences_are_nondup_and_closed() {
        let a = QSet::classical("A", &["a", "b"]).unwrap();
        let sig = Signature {
            sorts: vec![a.clone()],
            preds: vec![("r".into(), vec![a.clone(), a.clone()]), ("p".into(), vec![a.clone()])],
            fns: vec![("f".into(), vec![a.clone()], a.clone())],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let f = random_sentence(&mut rng, &sig, 3).unwrap();
            assert!(nondup_check(&f).is_ok(), "{f}");
            assert!(f.free_vars().is_empty(), "{f}");
            assert!(f.depth() <= 3);
        }
    }
}
