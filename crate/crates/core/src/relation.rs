//! Relations between quantum sets, stored as one subspace per atom pair.

use nalgebra::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::generators::random::haar_projection;
use crate::qset::QSet;
use crate::subspace::{kernel, vectorize, Star, SubspaceError};
use crate::{CMatrix, Subspace};

const TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelError {
    #[error("sort mismatch: expected {expected}, found {found}")]
    SortMismatch { expected: String, found: String },
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error("subspace is not a bimodule over the commutant (margin {0:.3e})")]
    NotAQuantumRelation(f64),
    #[error("invalid permutation {0:?}")]
    BadPermutation(Vec<usize>),
}

pub(crate) fn mismatch(expected: &QSet, found: &QSet) -> RelError {
    RelError::SortMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn one() -> Complex<f64> {
    Complex::new(1.0, 0.0)
}

/// A relation `dom -> cod`. Block `(i, j)` is a subspace of L(dom_i, cod_j).
#[derive(Debug, Clone)]
pub struct Relation {
    dom: QSet,
    cod: QSet,
    blocks: Vec<Subspace>,
}

impl Relation {
    pub fn from_fn(dom: &QSet, cod: &QSet, mut f: impl FnMut(usize, usize) -> Subspace) -> Self {
        let (n, m) = (dom.num_atoms(), cod.num_atoms());
        let mut blocks = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let b = f(i, j);
                debug_assert_eq!(b.shape(), (cod.dim(j), dom.dim(i)));
                blocks.push(b);
            }
        }
        Relation {
            dom: dom.clone(),
            cod: cod.clone(),
            blocks,
        }
    }

    /// Builds a relation from `(i, j, subspace)` entries; missing blocks are zero.
    pub fn from_blocks(
        dom: &QSet,
        cod: &QSet,
        entries: Vec<(usize, usize, Subspace)>,
    ) -> Result<Self, RelError> {
        let mut r = Self::bottom(dom, cod);
        for (i, j, s) in entries {
            r.set_block(i, j, s)?;
        }
        Ok(r)
    }

    pub fn top(dom: &QSet, cod: &QSet) -> Self {
        Self::from_fn(dom, cod, |i, j| Subspace::full(cod.dim(j), dom.dim(i)))
    }

    pub fn bottom(dom: &QSet, cod: &QSet) -> Self {
        Self::from_fn(dom, cod, |i, j| Subspace::zero(cod.dim(j), dom.dim(i)))
    }

    pub fn identity(x: &QSet) -> Self {
        Self::from_fn(x, x, |i, j| {
            let d = x.dim(i);
            if i == j {
                Subspace::span(&[CMatrix::identity(d, d)], d, d).expect("square identity")
            } else {
                Subspace::zero(x.dim(j), d)
            }
        })
    }

    /// Identity on `x` when `y == x`, otherwise a sort error.
    pub fn identity_on(x: &QSet, y: &QSet) -> Result<Self, RelError> {
        if x != y {
            return Err(mismatch(x, y));
        }
        Ok(Self::identity(x))
    }

    /// The equality predicate E_X of arity (X, X*).
    pub fn equality(x: &QSet) -> Self {
        let dom = x.product(&x.dual());
        let n = x.num_atoms();
        Self::from_fn(&dom, &QSet::unit(), |p, _| {
            let (i, k) = (p / n, p % n);
            let (di, dk) = (x.dim(i), x.dim(k));
            if i != k {
                return Subspace::zero(1, di * dk);
            }
            let mut row = CMatrix::zeros(1, di * di);
            for a in 0..di {
                row[(0, a * di + a)] = one();
            }
            Subspace::span(&[row], 1, di * di).expect("row functional")
        })
    }

    /// Transposition X x Y -> Y x X.
    pub fn braiding(x: &QSet, y: &QSet) -> Self {
        let dom = x.product(y);
        let cod = y.product(x);
        let (nx, ny) = (x.num_atoms(), y.num_atoms());
        Self::from_fn(&dom, &cod, |p, q| {
            let (i, k) = (p / ny, p % ny);
            let (di, dk) = (x.dim(i), y.dim(k));
            if q != k * nx + i {
                return Subspace::zero(cod.dim(q), dom.dim(p));
            }
            let mut m = CMatrix::zeros(dk * di, di * dk);
            for a in 0..di {
                for b in 0..dk {
                    m[(b * di + a, a * dk + b)] = one();
                }
            }
            Subspace::span(&[m], dk * di, di * dk).expect("swap matrix")
        })
    }

    pub fn dom(&self) -> &QSet {
        &self.dom
    }

    pub fn cod(&self) -> &QSet {
        &self.cod
    }

    pub fn block(&self, i: usize, j: usize) -> &Subspace {
        &self.blocks[i * self.cod.num_atoms() + j]
    }

    pub fn set_block(&mut self, i: usize, j: usize, s: Subspace) -> Result<(), RelError> {
        let want = (self.cod.dim(j), self.dom.dim(i));
        if s.shape() != want {
            return Err(SubspaceError::ShapeMismatch {
                expected: want,
                found: s.shape(),
            }
            .into());
        }
        let m = self.cod.num_atoms();
        self.blocks[i * m + j] = s;
        Ok(())
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize, &Subspace)> {
        let m = self.cod.num_atoms();
        self.blocks.iter().enumerate().map(move |(k, b)| (k / m, k % m, b))
    }

    /// Total rank over all blocks.
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank()).sum()
    }

    fn map_blocks(&self, f: impl Fn(&Subspace) -> Subspace) -> Self {
        Relation {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn check_parallel(&self, other: &Self) -> Result<(), RelError> {
        if self.dom != other.dom {
            return Err(mismatch(&self.dom, &other.dom));
        }
        if self.cod != other.cod {
            return Err(mismatch(&self.cod, &other.cod));
        }
        Ok(())
    }

    fn zip_blocks(
        &self,
        other: &Self,
        f: impl Fn(&Subspace, &Subspace) -> Result<Subspace, SubspaceError>,
    ) -> Result<Self, RelError> {
        self.check_parallel(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Relation {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            blocks,
        })
    }

    /// `self ∘ r`, with `r: X -> Y` and `self: Y -> Z`.
    pub fn compose(&self, r: &Relation) -> Result<Relation, RelError> {
        if self.dom != r.cod {
            return Err(mismatch(&self.dom, &r.cod));
        }
        let (nx, ny, nz) = (r.dom.num_atoms(), r.cod.num_atoms(), self.cod.num_atoms());
        let mut blocks = Vec::with_capacity(nx * nz);
        for i in 0..nx {
            for k in 0..nz {
                let (rows, cols) = (self.cod.dim(k), r.dom.dim(i));
                let mut parts = Vec::new();
                for j in 0..ny {
                    let s = self.block(j, k);
                    let t = r.block(i, j);
                    if s.is_zero() || t.is_zero() {
                        continue;
                    }
                    parts.push(s.mul_span(t)?);
                }
                blocks.push(match parts.len() {
                    0 => Subspace::zero(rows, cols),
                    1 => parts.pop().unwrap(),
                    _ => Subspace::join_all(rows, cols, &parts)?,
                });
            }
        }
        Ok(Relation {
            dom: r.dom.clone(),
            cod: self.cod.clone(),
            blocks,
        })
    }

    /// `self ∘ R` where `R: dom -> self.dom()` is given by its nonzero blocks,
    /// `col(i) = [(j, R(i, j))]`.
    pub fn compose_columns(
        &self,
        dom: &QSet,
        col: impl Fn(usize) -> Vec<(usize, Subspace)>,
    ) -> Result<Relation, RelError> {
        let nz = self.cod.num_atoms();
        let mut blocks = Vec::with_capacity(dom.num_atoms() * nz);
        for i in 0..dom.num_atoms() {
            let c = col(i);
            for k in 0..nz {
                let (rows, cols) = (self.cod.dim(k), dom.dim(i));
                let mut parts = Vec::new();
                for (j, t) in &c {
                    if t.shape() != (self.dom.dim(*j), cols) {
                        return Err(SubspaceError::ShapeMismatch {
                            expected: (self.dom.dim(*j), cols),
                            found: t.shape(),
                        }
                        .into());
                    }
                    let s = self.block(*j, k);
                    if s.is_zero() || t.is_zero() {
                        continue;
                    }
                    parts.push(s.mul_span(t)?);
                }
                blocks.push(match parts.len() {
                    0 => Subspace::zero(rows, cols),
                    1 => parts.pop().unwrap(),
                    _ => Subspace::join_all(rows, cols, &parts)?,
                });
            }
        }
        Ok(Relation {
            dom: dom.clone(),
            cod: self.cod.clone(),
            blocks,
        })
    }

    pub fn dagger(&self) -> Relation {
        Self::from_fn(&self.cod, &self.dom, |j, i| {
            self.block(i, j).star_image(Star::Dagger)
        })
    }

    /// The conjugate R_*: X* -> Y*, entrywise complex conjugation in dual bases.
    pub fn conjugate(&self) -> Relation {
        let dom = self.dom.dual();
        let cod = self.cod.dual();
        Self::from_fn(&dom, &cod, |i, j| self.block(i, j).star_image(Star::Conjugate))
    }

    /// The dual morphism R^*: Y* -> X*, blockwise transposition.
    pub fn transpose(&self) -> Relation {
        let dom = self.cod.dual();
        let cod = self.dom.dual();
        Self::from_fn(&dom, &cod, |j, i| self.block(i, j).star_image(Star::Transpose))
    }

    pub fn cross(&self, s: &Relation) -> Relation {
        let dom = self.dom.product(&s.dom);
        let cod = self.cod.product(&s.cod);
        let (n2, m2) = (s.dom.num_atoms(), s.cod.num_atoms());
        Self::from_fn(&dom, &cod, |p, q| {
            self.block(p / n2, q / m2).tensor(s.block(p % n2, q % m2))
        })
    }

    /// Cross product of a list; the identity on the unit set when empty.
    pub fn cross_all(rs: &[Relation]) -> Relation {
        let mut it = rs.iter();
        match it.next() {
            None => Self::identity(&QSet::unit()),
            Some(first) => it.fold(first.clone(), |acc, r| acc.cross(r)),
        }
    }

    pub fn neg(&self) -> Relation {
        self.map_blocks(|b| b.complement())
    }

    pub fn meet(&self, other: &Relation) -> Result<Relation, RelError> {
        self.zip_blocks(other, |a, b| a.meet(b))
    }

    pub fn join(&self, other: &Relation) -> Result<Relation, RelError> {
        self.zip_blocks(other, |a, b| a.join(b))
    }

    /// Largest blockwise inclusion defect; zero iff `self <= other`.
    pub fn leq_margin(&self, other: &Relation) -> Result<f64, RelError> {
        self.check_parallel(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.leq_margin(b))
            .fold(0.0, f64::max))
    }

    pub fn leq(&self, other: &Relation) -> Result<bool, RelError> {
        Ok(self.leq_margin(other)? <= TOL)
    }

    pub fn perp_margin(&self, other: &Relation) -> Result<f64, RelError> {
        self.check_parallel(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.orth_margin(b))
            .fold(0.0, f64::max))
    }

    pub fn perp(&self, other: &Relation) -> Result<bool, RelError> {
        Ok(self.perp_margin(other)? <= TOL)
    }

    /// Blockwise projector distance.
    pub fn distance(&self, other: &Relation) -> Result<f64, RelError> {
        Ok(self.leq_margin(other)?.max(other.leq_margin(self)?))
    }

    pub fn approx_eq(&self, other: &Relation) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && self.distance(other).map(|d| d <= TOL).unwrap_or(false)
    }

    pub fn is_top(&self) -> bool {
        self.blocks.iter().all(|b| b.is_full())
    }

    pub fn is_bottom(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    /// Sasaki arrow `¬P ∨ (P ∧ Q)`.
    pub fn sasaki_arrow(&self, q: &Relation) -> Result<Relation, RelError> {
        self.neg().join(&self.meet(q)?)
    }

    /// Sasaki projection `(P ∨ ¬Q) ∧ Q`.
    pub fn sasaki_and(&self, q: &Relation) -> Result<Relation, RelError> {
        self.join(&q.neg())?.meet(q)
    }

    /// Reorders arguments: the result `S` satisfies `S(x_1..x_n) = R(x_pi(1)..x_pi(n))`.
    ///
    /// `sorts` are the target sorts `X_1..X_n`; `self` has arity `X_pi(1)..X_pi(n)`.
    pub fn permute(&self, sorts: &[QSet], pi: &[usize]) -> Result<Relation, RelError> {
        check_perm(pi, sorts.len())?;
        let src_sorts: Vec<QSet> = pi.iter().map(|&p| sorts[p].clone()).collect();
        let src = QSet::product_all(&src_sorts);
        if self.dom != src {
            return Err(mismatch(&src, &self.dom));
        }
        let dst = QSet::product_all(sorts);
        let counts: Vec<usize> = sorts.iter().map(|s| s.num_atoms()).collect();
        let cod = self.cod.clone();
        let mut out = Relation::bottom(&dst, &cod);
        for t in 0..dst.num_atoms() {
            let tparts = split(t, &counts);
            let sparts: Vec<usize> = pi.iter().map(|&p| tparts[p]).collect();
            let s = join_parts(&sparts, pi.iter().map(|&p| counts[p]));
            let tdims: Vec<usize> = (0..sorts.len()).map(|k| sorts[k].dim(tparts[k])).collect();
            let sigma = shuffle_map(&tdims, pi);
            for j in 0..cod.num_atoms() {
                let b = self.block(s, j);
                if b.is_zero() {
                    continue;
                }
                out.set_block(t, j, b.permute_cols(&sigma))?;
            }
        }
        Ok(out)
    }

    /// The canonical isomorphism `X_1 x .. x X_n -> X_pi(1) x .. x X_pi(n)`
    /// assembled from adjacent braidings in bubble-sort order.
    pub fn shuffle_iso(sorts: &[QSet], pi: &[usize]) -> Result<Relation, RelError> {
        check_perm(pi, sorts.len())?;
        let mut cur: Vec<usize> = (0..sorts.len()).collect();
        let mut acc = Relation::identity(&QSet::product_all(sorts));
        for pos in 0..pi.len() {
            let mut at = cur.iter().position(|&c| c == pi[pos]).expect("permutation");
            while at > pos {
                let left: Vec<QSet> = cur[..at - 1].iter().map(|&c| sorts[c].clone()).collect();
                let right: Vec<QSet> = cur[at + 1..].iter().map(|&c| sorts[c].clone()).collect();
                let swap = Relation::identity(&QSet::product_all(&left))
                    .cross(&Relation::braiding(&sorts[cur[at - 1]], &sorts[cur[at]]))
                    .cross(&Relation::identity(&QSet::product_all(&right)));
                acc = swap.compose(&acc)?;
                cur.swap(at - 1, at);
                at -= 1;
            }
        }
        Ok(acc)
    }

    /// Same as [`Relation::permute`], computed as `R ∘ U_pi`.
    pub fn permute_via_braidings(&self, sorts: &[QSet], pi: &[usize]) -> Result<Relation, RelError> {
        self.compose(&Self::shuffle_iso(sorts, pi)?)
    }

    /// The predicate of arity (X, Y*) obtained by bending `self: X -> Y`.
    pub fn bend(&self) -> Result<Relation, RelError> {
        let y = &self.cod;
        Relation::equality(y).compose(&self.cross(&Relation::identity(&y.dual())))
    }

    /// Inverse of [`Relation::bend`] for a predicate of arity (X, Y*).
    pub fn unbend(&self, x: &QSet, y: &QSet) -> Result<Relation, RelError> {
        let want = x.product(&y.dual());
        if self.dom != want {
            return Err(mismatch(&want, &self.dom));
        }
        if !self.cod.is_unit() {
            return Err(mismatch(&QSet::unit(), &self.cod));
        }
        let cap = Relation::identity(x).cross(&Relation::equality(y).transpose());
        self.cross(&Relation::identity(y)).compose(&cap)
    }

    /// Trace predicate of an endorelation: ⊤ iff some block carries a nonzero trace.
    pub fn trace_pred(&self) -> Result<Relation, RelError> {
        if self.dom != self.cod {
            return Err(mismatch(&self.dom, &self.cod));
        }
        let u = QSet::unit();
        Ok(if self.trace_margin() > TOL {
            Relation::top(&u, &u)
        } else {
            Relation::bottom(&u, &u)
        })
    }

    /// Largest norm of the normalized trace functional on a diagonal block.
    pub fn trace_margin(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.dom.num_atoms() {
            let b = self.block(i, i);
            let d = self.dom.dim(i) as f64;
            let s: f64 = b
                .basis_matrices()
                .iter()
                .map(|m| m.trace().norm_sqr())
                .sum();
            best = best.max((s / d).sqrt());
        }
        best
    }

    /// Largest subspace of arity (X, X*) killed by every `p ⊗ (1-p)^T`.
    ///
    /// Projections are seeded Haar samples plus all central ones. With
    /// `transpose = false` the factor is `p ⊗ (1-p)` on X x X instead.
    pub fn delta_bruteforce(x: &QSet, n_samples: usize, seed: u64, transpose: bool) -> Relation {
        let second = if transpose { x.dual() } else { x.clone() };
        let dom = x.product(&second);
        let n = x.num_atoms();
        let mut r = Relation::top(&dom, &QSet::unit());
        let cut = |r: &mut Relation, p: &[CMatrix]| {
            for i in 0..n {
                for k in 0..n {
                    let (di, dk) = (x.dim(i), x.dim(k));
                    let q = CMatrix::identity(dk, dk) - &p[k];
                    let q = if transpose { q.transpose() } else { q };
                    let m = p[i].kronecker(&q);
                    let b = r.block(i * n + k, 0);
                    if b.is_zero() {
                        continue;
                    }
                    let basis = b.basis();
                    let ker = kernel(&(m.transpose() * basis));
                    let nb = Subspace::from_vectors(1, di * dk, basis * ker);
                    r.set_block(i * n + k, 0, nb).expect("same shape");
                }
            }
        };
        for c in 0..n {
            let p: Vec<CMatrix> = (0..n)
                .map(|i| {
                    let d = x.dim(i);
                    if i == c {
                        CMatrix::identity(d, d)
                    } else {
                        CMatrix::zeros(d, d)
                    }
                })
                .collect();
            cut(&mut r, &p);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stable = 0;
        let mut last = r.rank();
        for s in 0..n_samples {
            let p: Vec<CMatrix> = (0..n)
                .map(|i| {
                    let d = x.dim(i);
                    let k = if s % 2 == 0 { 1 } else { (d / 2).max(1) };
                    haar_projection(&mut rng, d, k)
                })
                .collect();
            cut(&mut r, &p);
            let now = r.rank();
            if now == last {
                stable += 1;
                if stable >= 10 {
                    break;
                }
            } else {
                stable = 0;
                last = now;
            }
        }
        r
    }

    /// Corner decomposition of a subspace of L(⊕X_i, ⊕Y_j).
    pub fn weaver_to_blocks(v: &Subspace, x: &QSet, y: &QSet) -> Result<Relation, RelError> {
        let (ty, tx) = (y.total_dim(), x.total_dim());
        if v.shape() != (ty, tx) {
            return Err(SubspaceError::ShapeMismatch {
                expected: (ty, tx),
                found: v.shape(),
            }
            .into());
        }
        let xo = offsets(x);
        let yo = offsets(y);
        let mats = v.basis_matrices();
        let mut worst: f64 = 0.0;
        let r = Relation::from_fn(x, y, |i, j| {
            let (dx, dy) = (x.dim(i), y.dim(j));
            let mut corners = Vec::with_capacity(mats.len());
            for m in &mats {
                let c = m.view((yo[j], xo[i]), (dy, dx)).into_owned();
                let mut emb = CMatrix::zeros(ty, tx);
                emb.view_mut((yo[j], xo[i]), (dy, dx)).copy_from(&c);
                if c.norm() > TOL {
                    worst = worst.max(v.residual_norm(&emb) * c.norm());
                }
                corners.push(c);
            }
            Subspace::span(&corners, dy, dx).expect("corner shape")
        });
        if worst > TOL {
            return Err(RelError::NotAQuantumRelation(worst));
        }
        Ok(r)
    }

    /// Smallest bimodule over the block-diagonal commutant containing `v`.
    pub fn weaver_closure(v: &Subspace, x: &QSet, y: &QSet) -> Result<Subspace, RelError> {
        let xo = offsets(x);
        let yo = offsets(y);
        let (ty, tx) = (y.total_dim(), x.total_dim());
        if v.shape() != (ty, tx) {
            return Err(SubspaceError::ShapeMismatch {
                expected: (ty, tx),
                found: v.shape(),
            }
            .into());
        }
        let mut corners = Vec::new();
        for m in v.basis_matrices() {
            for i in 0..x.num_atoms() {
                for j in 0..y.num_atoms() {
                    let (dx, dy) = (x.dim(i), y.dim(j));
                    let mut emb = CMatrix::zeros(ty, tx);
                    emb.view_mut((yo[j], xo[i]), (dy, dx))
                        .copy_from(&m.view((yo[j], xo[i]), (dy, dx)));
                    corners.push(emb);
                }
            }
        }
        Ok(Subspace::span(&corners, ty, tx)?)
    }

    /// Inverse of [`Relation::weaver_to_blocks`].
    pub fn weaver_to_global(&self) -> Subspace {
        let (x, y) = (&self.dom, &self.cod);
        let (ty, tx) = (y.total_dim(), x.total_dim());
        let xo = offsets(x);
        let yo = offsets(y);
        let mut vecs = Vec::new();
        for (i, j, b) in self.blocks() {
            for m in b.basis_matrices() {
                let mut emb = CMatrix::zeros(ty, tx);
                emb.view_mut((yo[j], xo[i]), (y.dim(j), x.dim(i))).copy_from(&m);
                vecs.push(vectorize(&emb));
            }
        }
        let mut a = CMatrix::zeros(ty * tx, vecs.len());
        for (k, v) in vecs.iter().enumerate() {
            a.set_column(k, v);
        }
        Subspace::from_vectors(ty, tx, a)
    }
}

fn offsets(x: &QSet) -> Vec<usize> {
    let mut acc = 0;
    x.atom_dims()
        .iter()
        .map(|&d| {
            let o = acc;
            acc += d;
            o
        })
        .collect()
}

fn check_perm(pi: &[usize], n: usize) -> Result<(), RelError> {
    let mut seen = vec![false; n];
    if pi.len() != n {
        return Err(RelError::BadPermutation(pi.to_vec()));
    }
    for &p in pi {
        if p >= n || seen[p] {
            return Err(RelError::BadPermutation(pi.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Mixed-radix digits of `t`, most significant first.
pub(crate) fn split(mut t: usize, radix: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radix.len()];
    for k in (0..radix.len()).rev() {
        out[k] = t % radix[k];
        t /= radix[k];
    }
    out
}

pub(crate) fn join_parts(parts: &[usize], radix: impl Iterator<Item = usize>) -> usize {
    parts.iter().zip(radix).fold(0, |acc, (&p, r)| acc * r + p)
}

/// Matrix sending `⊗_k e_k` (target order) to `⊗_i e_pi(i)` (source order).
/// Column `c` of the shuffle matrix has its one in row `shuffle_map(..)[c]`.
fn shuffle_map(tdims: &[usize], pi: &[usize]) -> Vec<usize> {
    let n: usize = tdims.iter().product();
    let sdims: Vec<usize> = pi.iter().map(|&p| tdims[p]).collect();
    (0..n)
        .map(|col| {
            let c = split(col, tdims);
            let b: Vec<usize> = pi.iter().map(|&p| c[p]).collect();
            join_parts(&b, sdims.iter().cloned())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::c;

    fn x2() -> QSet {
        QSet::from_dims("X", &[2]).unwrap()
    }

    fn span1(m: CMatrix) -> Subspace {
        let (r, c) = m.shape();
        Subspace::span(&[m], r, c).unwrap()
    }

    #[test]
    fn constants() {
        let id = Relation::identity(&x2());
        assert!(id.block(0, 0).approx_eq(&span1(CMatrix::identity(2, 2))));
        let a = QSet::classical("A", &["a", "b"]).unwrap();
        let t = Relation::top(&a, &QSet::unit());
        assert!(t.blocks().all(|(_, _, b)| b.rank() == 1));
        assert!(Relation::identity_on(&a, &x2()).is_err());
    }

    #[test]
    fn equality_blocks() {
        let e = Relation::equality(&x2());
        let row = CMatrix::from_row_slice(1, 4, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        assert!(e.block(0, 0).approx_eq(&span1(row)));
        let y = QSet::from_dims("Y", &[1, 2]).unwrap();
        let ey = Relation::equality(&y);
        assert!(ey.block(1, 0).is_zero() && ey.block(2, 0).is_zero());
        assert_eq!(ey.block(0, 0).rank() + ey.block(3, 0).rank(), 2);
    }

    #[test]
    fn compose_examples() {
        let x = x2();
        let r = Relation::top(&x, &x).neg().join(&Relation::identity(&x)).unwrap();
        assert!(Relation::identity(&x).compose(&r).unwrap().approx_eq(&r));
        assert!(Relation::bottom(&x, &x).compose(&r).unwrap().is_bottom());
        let u = QSet::unit();
        let t = Relation::top(&x, &u).compose(&Relation::top(&u, &x)).unwrap();
        assert!(t.is_top());
        let tt = Relation::top(&x, &u).compose(&Relation::top(&x, &x)).unwrap();
        assert!(tt.approx_eq(&Relation::top(&x, &u)));
    }

    #[test]
    fn conjugate_of_equality() {
        let x = x2();
        let e = Relation::equality(&x);
        let ec = e.conjugate();
        assert_eq!(ec.dom(), &x.dual().product(&x));
        let row = CMatrix::from_row_slice(1, 4, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        assert!(ec.block(0, 0).approx_eq(&span1(row)));
        assert!(e.dagger().dagger().approx_eq(&e));
    }

    #[test]
    fn cross_examples() {
        let x = x2();
        let y = QSet::from_dims("Y", &[1, 3]).unwrap();
        let u = QSet::unit();
        assert!(Relation::top(&x, &u).cross(&Relation::top(&y, &u)).approx_eq(&Relation::top(&x.product(&y), &u)));
        assert!(Relation::identity(&x).cross(&Relation::identity(&y)).approx_eq(&Relation::identity(&x.product(&y))));
        assert!(Relation::identity(&x).cross(&Relation::bottom(&y, &y)).is_bottom());
    }

    #[test]
    fn sasaki_example() {
        let x = x2();
        let u = QSet::unit();
        let p = Relation::from_blocks(&x, &u, vec![(0, 0, span1(CMatrix::from_row_slice(1, 2, &[c(1., 0.), c(0., 0.)])))]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let q = Relation::from_blocks(&x, &u, vec![(0, 0, span1(CMatrix::from_row_slice(1, 2, &[c(h, 0.), c(h, 0.)])))]).unwrap();
        let a = p.sasaki_arrow(&q).unwrap();
        let want = span1(CMatrix::from_row_slice(1, 2, &[c(0., 0.), c(1., 0.)]));
        assert!(a.block(0, 0).approx_eq(&want));
        assert!(p.sasaki_arrow(&p).unwrap().is_top());
        assert!(Relation::bottom(&x, &u).sasaki_arrow(&q).unwrap().is_top());
    }

    #[test]
    fn permute_swap_classical() {
        let a = QSet::classical("A", &["a", "b"]).unwrap();
        let aa = a.product(&a);
        let u = QSet::unit();
        let r = Relation::from_blocks(&aa, &u, vec![(1, 0, Subspace::full(1, 1))]).unwrap();
        let s = r.permute(&[a.clone(), a.clone()], &[1, 0]).unwrap();
        let want = Relation::from_blocks(&aa, &u, vec![(2, 0, Subspace::full(1, 1))]).unwrap();
        assert!(s.approx_eq(&want));
        assert!(r.permute(&[a.clone(), a.clone()], &[0, 1]).unwrap().approx_eq(&r));
        assert!(r.permute_via_braidings(&[a.clone(), a], &[1, 0]).unwrap().approx_eq(&want));
    }

    #[test]
    fn bend_examples() {
        let x = x2();
        assert!(Relation::identity(&x).bend().unwrap().approx_eq(&Relation::equality(&x)));
        let y = QSet::from_dims("Y", &[1, 2]).unwrap();
        assert!(Relation::bottom(&x, &y).bend().unwrap().is_bottom());
        let r = Relation::top(&x, &y);
        assert!(r.bend().unwrap().unbend(&x, &y).unwrap().approx_eq(&r));
    }

    #[test]
    fn trace_examples() {
        let x = x2();
        assert!(Relation::identity(&x).trace_pred().unwrap().is_top());
        let mut e12 = CMatrix::zeros(2, 2);
        e12[(0, 1)] = c(1., 0.);
        let r = Relation::from_blocks(&x, &x, vec![(0, 0, span1(e12))]).unwrap();
        assert!(r.trace_pred().unwrap().is_bottom());
    }

    #[test]
    fn delta_examples() {
        let x = x2();
        let d = Relation::delta_bruteforce(&x, 200, 7, true);
        assert!(d.approx_eq(&Relation::equality(&x)));
        let a = QSet::classical("A", &["a", "b", "c"]).unwrap();
        assert!(Relation::delta_bruteforce(&a, 50, 1, true).approx_eq(&Relation::equality(&a)));
        assert!(Relation::delta_bruteforce(&x, 200, 7, false).is_bottom());
    }

    #[test]
    fn weaver_examples() {
        let a = QSet::classical("A", &["a", "b"]).unwrap();
        let one = span1(CMatrix::identity(2, 2));
        assert!(Relation::weaver_to_blocks(&one, &a, &a).is_err());
        let v = Relation::weaver_closure(&one, &a, &a).unwrap();
        let r = Relation::weaver_to_blocks(&v, &a, &a).unwrap();
        assert!(r.approx_eq(&Relation::identity(&a)));
        assert!(r.weaver_to_global().approx_eq(&v));
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1., 0.);
        m[(1, 0)] = c(1., 0.);
        assert!(matches!(
            Relation::weaver_to_blocks(&span1(m), &a, &a),
            Err(RelError::NotAQuantumRelation(_))
        ));
    }
}
