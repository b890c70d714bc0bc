//! Subspaces of operator spaces L(X,Y) under the Hilbert-Schmidt inner product.
//!
//! A matrix of shape `rows x cols` is identified with its row-major
//! vectorization in C^(rows*cols). A subspace stores an orthonormal basis of
//! such vectors as the columns of a single matrix.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

use crate::scalar::{rank_threshold, Scalar};

/// Dense complex matrix.
pub type CMat<T> = DMatrix<Complex<T>>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubspaceError {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

/// Involutions acting entrywise on a subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Star {
    Dagger,
    Transpose,
    Conjugate,
}

/// Result of comparing two subspaces of the same ambient space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison<T> {
    pub leq: bool,
    pub geq: bool,
    pub equal: bool,
    pub orthogonal: bool,
    /// ||(1 - P_T) P_S||
    pub leq_margin: T,
    /// ||(1 - P_S) P_T||
    pub geq_margin: T,
    /// ||P_T P_S||
    pub orth_margin: T,
}

#[derive(Debug, Clone)]
pub struct Subspace<T: Scalar> {
    rows: usize,
    cols: usize,
    basis: CMat<T>,
}

pub fn c<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

/// Row-major vectorization.
pub fn vectorize<T: Scalar>(m: &CMat<T>) -> DVector<Complex<T>> {
    DVector::from_iterator(m.len(), m.transpose().iter().cloned())
}

/// Inverse of [`vectorize`].
pub fn unvectorize<T: Scalar>(v: &[Complex<T>], rows: usize, cols: usize) -> CMat<T> {
    DMatrix::from_row_slice(rows, cols, v)
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm<T: Scalar>(m: &CMat<T>) -> T {
    if m.nrows() == 0 || m.ncols() == 0 {
        return T::zero();
    }
    T::svd(m, false, false)
        .sigma
        .first()
        .cloned()
        .unwrap_or_else(T::zero)
}

/// Orthonormal basis of the column space at the numerical rank threshold.
pub fn orthonormalize<T: Scalar>(a: CMat<T>) -> CMat<T> {
    let n = a.nrows();
    if a.ncols() == 0 || n == 0 {
        return CMat::zeros(n, 0);
    }
    let svd = T::svd(&a, true, false);
    let u = svd.u.expect("left singular vectors requested");
    let tol = rank_threshold(svd.sigma.first().cloned().unwrap_or_else(T::zero));
    let r = svd.sigma.iter().take_while(|&&s| s > tol).count();
    u.columns(0, r).into_owned()
}

/// Orthonormal basis of the null space of `m` (columns of length `m.ncols()`).
pub fn kernel<T: Scalar>(m: &CMat<T>) -> CMat<T> {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let svd = T::svd(m, false, true);
    let v = svd.v.expect("right singular vectors requested");
    let tol = rank_threshold(svd.sigma.first().cloned().unwrap_or_else(T::zero));
    let r = svd.sigma.iter().take_while(|&&s| s > tol).count();
    v.columns(r, n - r).into_owned()
}

fn mm<T: Scalar>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    T::matmul(a, b, false)
}

/// `a^dagger * b`.
fn mh<T: Scalar>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    T::matmul(a, b, true)
}

fn kron<T: Scalar>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a.kronecker(b)
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Subspace {
            rows,
            cols,
            basis: CMat::zeros(rows * cols, 0),
        }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        Subspace {
            rows,
            cols,
            basis: CMat::identity(n, n),
        }
    }

    /// Linear span of matrices of the given ambient shape.
    pub fn span(mats: &[CMat<T>], rows: usize, cols: usize) -> Result<Self, SubspaceError> {
        let mut a = CMat::zeros(rows * cols, mats.len());
        for (k, m) in mats.iter().enumerate() {
            if m.shape() != (rows, cols) {
                return Err(SubspaceError::ShapeMismatch {
                    expected: (rows, cols),
                    found: m.shape(),
                });
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(SubspaceError::NonFinite);
            }
            a.set_column(k, &vectorize(m));
        }
        Ok(Self::from_vectors(rows, cols, a))
    }

    /// Span of the columns of `vecs`, each a vectorized `rows x cols` matrix.
    pub fn from_vectors(rows: usize, cols: usize, vecs: CMat<T>) -> Self {
        assert_eq!(vecs.nrows(), rows * cols, "vector length must match ambient");
        Subspace {
            rows,
            cols,
            basis: orthonormalize(vecs),
        }
    }

    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(rows: usize, cols: usize, basis: CMat<T>) -> Self {
        debug_assert_eq!(basis.nrows(), rows * cols);
        Subspace { rows, cols, basis }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.rows * self.cols
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim()
    }

    /// Orthonormal basis, one vectorized matrix per column.
    pub fn basis(&self) -> &CMat<T> {
        &self.basis
    }

    pub fn basis_matrix(&self, k: usize) -> CMat<T> {
        let col: Vec<Complex<T>> = self.basis.column(k).iter().cloned().collect();
        unvectorize(&col, self.rows, self.cols)
    }

    pub fn basis_matrices(&self) -> Vec<CMat<T>> {
        (0..self.rank()).map(|k| self.basis_matrix(k)).collect()
    }

    /// Orthogonal projector onto the subspace in HS coordinates.
    pub fn projector(&self) -> CMat<T> {
        mm(&self.basis, &self.basis.adjoint())
    }

    fn check_same(&self, other: &Self) -> Result<(), SubspaceError> {
        if self.shape() != other.shape() {
            return Err(SubspaceError::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }

    pub fn join(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_same(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let (a, b) = if self.rank() >= other.rank() { (self, other) } else { (other, self) };
        // project b off a twice, then keep what is left above the rank threshold
        let r1 = &b.basis - mm(&a.basis, &mh(&a.basis, &b.basis));
        let r2 = &r1 - mm(&a.basis, &mh(&a.basis, &r1));
        let extra = orthonormalize(r2);
        let n = self.ambient_dim();
        let mut basis = CMat::zeros(n, a.rank() + extra.ncols());
        basis.view_mut((0, 0), (n, a.rank())).copy_from(&a.basis);
        basis.view_mut((0, a.rank()), (n, extra.ncols())).copy_from(&extra);
        Ok(Subspace {
            rows: self.rows,
            cols: self.cols,
            basis,
        })
    }

    /// Join of many subspaces of one ambient shape.
    pub fn join_all(rows: usize, cols: usize, parts: &[Self]) -> Result<Self, SubspaceError> {
        let n = rows * cols;
        let total: usize = parts.iter().map(|p| p.rank()).sum();
        let mut a = CMat::zeros(n, total);
        let mut at = 0;
        for p in parts {
            if p.shape() != (rows, cols) {
                return Err(SubspaceError::ShapeMismatch {
                    expected: (rows, cols),
                    found: p.shape(),
                });
            }
            a.view_mut((0, at), (n, p.rank())).copy_from(&p.basis);
            at += p.rank();
        }
        Ok(Self::from_vectors(rows, cols, a))
    }

    pub fn complement(&self) -> Self {
        let n = self.ambient_dim();
        if self.is_zero() {
            return Self::full(self.rows, self.cols);
        }
        if self.rank() == n {
            return Self::zero(self.rows, self.cols);
        }
        Subspace {
            rows: self.rows,
            cols: self.cols,
            basis: T::complement_basis(&self.basis),
        }
    }

    pub fn meet(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.rows, self.cols));
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let (a, b) = if self.rank() <= other.rank() { (self, other) } else { (other, self) };
        // a c lies in b iff (1 - P_b) a c = 0
        let m = &a.basis - mm(&b.basis, &mh(&b.basis, &a.basis));
        Ok(Subspace {
            rows: self.rows,
            cols: self.cols,
            basis: mm(&a.basis, &kernel(&m)),
        })
    }

    /// ||(1 - P_other) P_self||
    pub fn leq_margin(&self, other: &Self) -> T {
        if self.is_zero() {
            return T::zero();
        }
        if other.is_zero() {
            return T::one();
        }
        let proj = mm(&other.basis, &mh(&other.basis, &self.basis));
        spectral_norm(&(&self.basis - proj))
    }

    /// ||P_other P_self||
    pub fn orth_margin(&self, other: &Self) -> T {
        if self.is_zero() || other.is_zero() {
            return T::zero();
        }
        spectral_norm(&mh(&other.basis, &self.basis))
    }

    pub fn compare(&self, other: &Self) -> Result<Comparison<T>, SubspaceError> {
        self.check_same(other)?;
        let tol = T::cmp_tol();
        let l = self.leq_margin(other);
        let g = other.leq_margin(self);
        let o = self.orth_margin(other);
        Ok(Comparison {
            leq: l <= tol,
            geq: g <= tol,
            equal: l <= tol && g <= tol,
            orthogonal: o <= tol,
            leq_margin: l,
            geq_margin: g,
            orth_margin: o,
        })
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.leq_margin(other) <= T::cmp_tol()
    }

    /// Projector distance ||P_self - P_other||.
    pub fn distance(&self, other: &Self) -> T {
        let a = self.leq_margin(other);
        let b = other.leq_margin(self);
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.distance(other) <= T::cmp_tol()
    }

    /// Distance of a unit-normalized matrix from the subspace.
    pub fn residual_norm(&self, m: &CMat<T>) -> T {
        let v = vectorize(m);
        let nv = v.norm();
        if nv == T::zero() {
            return T::zero();
        }
        let v = v / Complex::new(nv, T::zero());
        let p = &self.basis * (self.basis.adjoint() * &v);
        (v - p).norm()
    }

    /// Span of products `s * t`; `self` in L(Y,Z), `t` in L(X,Y).
    pub fn mul_span(&self, t: &Self) -> Result<Self, SubspaceError> {
        if self.cols != t.rows {
            return Err(SubspaceError::ShapeMismatch {
                expected: (self.cols, t.cols),
                found: t.shape(),
            });
        }
        let (rows, cols) = (self.rows, t.cols);
        if self.is_zero() || t.is_zero() {
            return Ok(Self::zero(rows, cols));
        }
        let ss = self.basis_matrices();
        let ts = t.basis_matrices();
        let mut a = CMat::zeros(rows * cols, ss.len() * ts.len());
        let mut k = 0;
        for s in &ss {
            for tm in &ts {
                a.set_column(k, &vectorize(&(s * tm)));
                k += 1;
            }
        }
        Ok(Self::from_vectors(rows, cols, a))
    }

    /// Span of Kronecker products, left factor major.
    pub fn tensor(&self, t: &Self) -> Self {
        let rows = self.rows * t.rows;
        let cols = self.cols * t.cols;
        if self.is_zero() || t.is_zero() {
            return Self::zero(rows, cols);
        }
        let ss = self.basis_matrices();
        let ts = t.basis_matrices();
        let mut a = CMat::zeros(rows * cols, ss.len() * ts.len());
        let mut k = 0;
        for s in &ss {
            for tm in &ts {
                a.set_column(k, &vectorize(&kron(s, tm)));
                k += 1;
            }
        }
        // products of orthonormal families stay orthonormal
        Subspace {
            rows,
            cols,
            basis: a,
        }
    }

    /// `{M U}` for the permutation matrix `U` with `U[sigma[c], c] = 1`.
    pub fn permute_cols(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.cols, "permutation length must match columns");
        let (rows, cols) = (self.rows, self.cols);
        let basis = CMat::from_fn(rows * cols, self.basis.ncols(), |idx, k| {
            let (r, c) = (idx / cols, idx % cols);
            self.basis[(r * cols + sigma[c], k)]
        });
        Subspace { rows, cols, basis }
    }

    pub fn star_image(&self, mode: Star) -> Self {
        let (rows, cols) = match mode {
            Star::Dagger | Star::Transpose => (self.cols, self.rows),
            Star::Conjugate => (self.rows, self.cols),
        };
        let mut a = CMat::zeros(rows * cols, self.rank());
        for (k, m) in self.basis_matrices().iter().enumerate() {
            let img = match mode {
                Star::Dagger => m.adjoint(),
                Star::Transpose => m.transpose(),
                Star::Conjugate => m.map(|z| z.conj()),
            };
            a.set_column(k, &vectorize(&img));
        }
        Subspace {
            rows,
            cols,
            basis: a,
        }
    }

    /// Largest `T` in L(B) of shape `b_rows x b_cols` with `v (x) T` inside `w`.
    pub fn residual_factor(
        v: &Self,
        w: &Self,
        b_rows: usize,
        b_cols: usize,
    ) -> Result<Self, SubspaceError> {
        let expected = (v.rows * b_rows, v.cols * b_cols);
        if w.shape() != expected {
            return Err(SubspaceError::ShapeMismatch {
                expected,
                found: w.shape(),
            });
        }
        if v.is_zero() {
            return Ok(Self::full(b_rows, b_cols));
        }
        if w.is_full() {
            return Ok(Self::full(b_rows, b_cols));
        }
        let nb = b_rows * b_cols;
        let nab = w.ambient_dim();
        let wc = w.complement();
        let stacked_rows = v.rank() * wc.rank();
        let mut m = CMat::zeros(stacked_rows, nb);
        let units: Vec<CMat<T>> = (0..nb)
            .map(|t| {
                let mut e = CMat::zeros(b_rows, b_cols);
                e[(t / b_cols, t % b_cols)] = Complex::new(T::one(), T::zero());
                e
            })
            .collect();
        for (i, vm) in v.basis_matrices().iter().enumerate() {
            let mut k = CMat::zeros(nab, nb);
            for (t, e) in units.iter().enumerate() {
                k.set_column(t, &vectorize(&kron(vm, e)));
            }
            // coordinates of (1 - P_W)(v_i (x) e_t) in the complement basis
            let block = mh(&wc.basis, &k);
            m.view_mut((i * wc.rank(), 0), (wc.rank(), nb))
                .copy_from(&block);
        }
        Ok(Subspace {
            rows: b_rows,
            cols: b_cols,
            basis: kernel(&m),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = Subspace<f64>;

    fn unit(r: usize, c: usize, i: usize, j: usize) -> CMat<f64> {
        let mut m = CMat::zeros(r, c);
        m[(i, j)] = Complex::new(1.0, 0.0);
        m
    }

    fn ident(n: usize) -> CMat<f64> {
        CMat::identity(n, n)
    }

    #[test]
    fn span_examples() {
        let two = ident(2) * Complex::new(2.0, 0.0);
        assert_eq!(S::span(&[ident(2), two], 2, 2).unwrap().rank(), 1);
        assert_eq!(S::span(&[], 2, 2).unwrap().rank(), 0);
        let s = S::span(&[unit(2, 2, 0, 0), unit(2, 2, 0, 1)], 2, 2).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(matches!(
            S::span(&[ident(3)], 2, 2),
            Err(SubspaceError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn join_meet_examples() {
        let e11 = S::span(&[unit(2, 2, 0, 0)], 2, 2).unwrap();
        let e22 = S::span(&[unit(2, 2, 1, 1)], 2, 2).unwrap();
        assert_eq!(e11.join(&e22).unwrap().rank(), 2);
        assert!(e11.join(&S::zero(2, 2)).unwrap().approx_eq(&e11));
        let id = S::span(&[ident(2)], 2, 2).unwrap();
        let j = e11.join(&id).unwrap();
        assert_eq!(j.rank(), 2);
        assert!(j.residual_norm(&unit(2, 2, 1, 1)) < 1e-10);

        assert!(e11.meet(&e22).unwrap().is_zero());
        assert!(e11.meet(&S::full(2, 2)).unwrap().approx_eq(&e11));
        let a = S::span(&[unit(2, 2, 0, 0), unit(2, 2, 0, 1)], 2, 2).unwrap();
        let b = S::span(&[unit(2, 2, 0, 1), unit(2, 2, 1, 0)], 2, 2).unwrap();
        let m = a.meet(&b).unwrap();
        assert!(m.approx_eq(&S::span(&[unit(2, 2, 0, 1)], 2, 2).unwrap()));
    }

    #[test]
    fn complement_examples() {
        let id = S::span(&[ident(2)], 2, 2).unwrap();
        assert_eq!(id.complement().rank(), 3);
        assert!(S::zero(2, 2).complement().is_full());
        assert!(id.complement().complement().approx_eq(&id));
    }

    #[test]
    fn compare_examples() {
        let e11 = S::span(&[unit(2, 2, 0, 0)], 2, 2).unwrap();
        let row = S::span(&[unit(2, 2, 0, 0), unit(2, 2, 0, 1)], 2, 2).unwrap();
        let c = e11.compare(&row).unwrap();
        assert!(c.leq && !c.geq);
        assert!(e11.compare(&e11).unwrap().equal);
        let e22 = S::span(&[unit(2, 2, 1, 1)], 2, 2).unwrap();
        assert!(e11.compare(&e22).unwrap().orthogonal);
    }

    #[test]
    fn mul_span_examples() {
        let e11 = S::span(&[unit(2, 2, 0, 0)], 2, 2).unwrap();
        let e12 = S::span(&[unit(2, 2, 0, 1)], 2, 2).unwrap();
        assert!(e11.mul_span(&e12).unwrap().approx_eq(&e12));
        let one = S::span(&[ident(2)], 2, 2).unwrap();
        assert!(one.mul_span(&e12).unwrap().approx_eq(&e12));
        assert!(e11.mul_span(&S::zero(2, 2)).unwrap().is_zero());
    }

    #[test]
    fn tensor_examples() {
        let e11 = S::span(&[unit(2, 2, 0, 0)], 2, 2).unwrap();
        let t = e11.tensor(&e11);
        assert_eq!((t.rank(), t.shape()), (1, (4, 4)));
        let f = S::full(1, 2).tensor(&S::full(1, 2));
        assert!(f.approx_eq(&S::full(1, 4)));
        assert!(e11.tensor(&S::zero(2, 2)).is_zero());
    }

    #[test]
    fn star_examples() {
        let e12 = S::span(&[unit(2, 2, 0, 1)], 2, 2).unwrap();
        let e21 = S::span(&[unit(2, 2, 1, 0)], 2, 2).unwrap();
        assert!(e12.star_image(Star::Dagger).approx_eq(&e21));
        let id = S::span(&[ident(2)], 2, 2).unwrap();
        assert!(id.star_image(Star::Dagger).approx_eq(&id));
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = Complex::new(0.0, 1.0);
        let s = S::span(&[m], 2, 2).unwrap();
        assert!(s.star_image(Star::Transpose).approx_eq(&s));
        assert!(s.star_image(Star::Dagger).approx_eq(&s));
        let rect = S::full(1, 3);
        assert_eq!(rect.star_image(Star::Dagger).shape(), (3, 1));
        assert_eq!(rect.star_image(Star::Conjugate).shape(), (1, 3));
    }

    #[test]
    fn residual_examples() {
        let v = S::span(&[unit(1, 2, 0, 0)], 1, 2).unwrap();
        let w = v.tensor(&S::full(2, 2));
        assert!(S::residual_factor(&v, &w, 2, 2).unwrap().is_full());
        let z = S::residual_factor(&v, &S::zero(2, 4), 2, 2).unwrap();
        assert!(z.is_zero());
        let v2 = S::full(1, 2);
        let b1 = S::span(&[unit(1, 2, 0, 0)], 1, 2).unwrap();
        let w2 = v.tensor(&b1);
        assert!(S::residual_factor(&v2, &w2, 1, 2).unwrap().is_zero());
        assert!(S::residual_factor(&v, &w2, 1, 2).unwrap().approx_eq(&b1));
    }

    #[test]
    fn kernel_of_wide_and_tall() {
        let m = CMat::<f64>::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(kernel(&m).ncols(), 2);
        let t = CMat::<f64>::identity(4, 2);
        assert_eq!(kernel(&t).ncols(), 0);
    }

    #[test]
    fn single_precision_works() {
        let a = Subspace::<f32>::full(2, 2);
        let b = Subspace::<f32>::zero(2, 2).complement();
        assert!(a.approx_eq(&b));
    }
}
