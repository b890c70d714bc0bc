//! Real scalar types usable by the linear-algebra layer.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::svd::{svd as svd_into, svd_scratch, ComputeSvdVectors, SvdParams};
use faer::diag::Diag;
use faer::{Mat, Par, Spec};
use nalgebra::{Complex, DMatrix, RealField};
use num_traits::FromPrimitive;

/// Singular value decomposition pieces, values in descending order.
pub struct SvdParts<T: Scalar> {
    pub sigma: Vec<T>,
    /// Left singular vectors, thin.
    pub u: Option<DMatrix<Complex<T>>>,
    /// Right singular vectors, full square.
    pub v: Option<DMatrix<Complex<T>>>,
}

/// A real floating-point type backing complex matrices: `f32` or `f64`.
pub trait Scalar: RealField + Copy + FromPrimitive {
    /// Relative singular-value threshold used for numerical rank.
    fn rank_tol() -> Self;
    /// Absolute threshold for subspace inclusion and orthogonality.
    fn cmp_tol() -> Self;

    /// Complex SVD; `want_u` yields thin U, `want_v` yields full V.
    fn svd(a: &DMatrix<Complex<Self>>, want_u: bool, want_v: bool) -> SvdParts<Self>;

    /// `a * b`, or `a^dagger * b` when `adjoint_a` is set.
    fn matmul(a: &DMatrix<Complex<Self>>, b: &DMatrix<Complex<Self>>, adjoint_a: bool) -> DMatrix<Complex<Self>>;

    /// Orthonormal basis of the orthogonal complement of the span of the orthonormal columns of `b`.
    fn complement_basis(b: &DMatrix<Complex<Self>>) -> DMatrix<Complex<Self>>;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("representable constant")
    }
}

macro_rules! faer_svd {
    ($t:ty) => {
        fn svd(a: &DMatrix<Complex<$t>>, want_u: bool, want_v: bool) -> SvdParts<$t> {
            let (m, n) = a.shape();
            let k = m.min(n);
            if k == 0 {
                return SvdParts {
                    sigma: Vec::new(),
                    u: want_u.then(|| DMatrix::zeros(m, 0)),
                    v: want_v.then(|| DMatrix::identity(n, n)),
                };
            }
            let fm = Mat::<Complex<$t>>::from_fn(m, n, |i, j| a[(i, j)]);
            // V is full square; U is thin
            let cu = if want_u { ComputeSvdVectors::Thin } else { ComputeSvdVectors::No };
            let cv = if want_v { ComputeSvdVectors::Full } else { ComputeSvdVectors::No };
            let mut s = Diag::<Complex<$t>>::zeros(k);
            let mut uu = Mat::<Complex<$t>>::zeros(m, if want_u { k } else { 0 });
            let mut vv = Mat::<Complex<$t>>::zeros(n, if want_v { n } else { 0 });
            // the divide and conquer path loses accuracy on clustered tiny singular values
            let mut params: Spec<SvdParams, Complex<$t>> = Default::default();
            params.recursion_threshold = usize::MAX;
            let par = Par::Seq;
            let mut mem = MemBuffer::new(svd_scratch::<Complex<$t>>(m, n, cu, cv, par, params));
            svd_into(
                fm.as_ref(),
                s.as_mut(),
                want_u.then(|| uu.as_mut()),
                want_v.then(|| vv.as_mut()),
                par,
                MemStack::new(&mut mem),
                params,
            )
            .expect("svd converges");
            let s = s.column_vector();
            let sigma: Vec<$t> = (0..k).map(|i| s[i].re).collect();
            let u = want_u.then(|| DMatrix::from_fn(m, k, |i, j| uu[(i, j)]));
            let v = want_v.then(|| DMatrix::from_fn(n, n, |i, j| vv[(i, j)]));
            SvdParts { sigma, u, v }
        }

        fn matmul(a: &DMatrix<Complex<$t>>, b: &DMatrix<Complex<$t>>, adjoint_a: bool) -> DMatrix<Complex<$t>> {
            let fa = to_faer(a);
            let fb = to_faer(b);
            let p = if adjoint_a { fa.adjoint() * &fb } else { &fa * &fb };
            from_faer(p.as_ref())
        }

        fn complement_basis(b: &DMatrix<Complex<$t>>) -> DMatrix<Complex<$t>> {
            let (n, k) = b.shape();
            if k == 0 {
                return DMatrix::identity(n, n);
            }
            let q = to_faer(b).qr().compute_Q();
            DMatrix::from_fn(n, n - k, |i, j| q[(i, k + j)])
        }
    };
}

fn to_faer<T: Scalar>(a: &DMatrix<Complex<T>>) -> Mat<Complex<T>>
where
    Complex<T>: faer::traits::ComplexField,
{
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer<T: Scalar>(a: faer::MatRef<'_, Complex<T>>) -> DMatrix<Complex<T>> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

impl Scalar for f64 {
    fn rank_tol() -> Self {
        1e-9
    }
    fn cmp_tol() -> Self {
        1e-8
    }
    faer_svd!(f64);
}

// single precision cannot resolve 1e-9; thresholds scale with machine epsilon
impl Scalar for f32 {
    fn rank_tol() -> Self {
        1e-5
    }
    fn cmp_tol() -> Self {
        1e-4
    }
    faer_svd!(f32);
}

/// Numerical rank threshold for a matrix whose largest singular value is `smax`.
pub fn rank_threshold<T: Scalar>(smax: T) -> T {
    let one = T::one();
    T::rank_tol() * if smax > one { smax } else { one }
}
