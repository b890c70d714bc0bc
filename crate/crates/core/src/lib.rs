//! Quantum relations: subspaces, quantum sets, relational logic and structure checks.

pub mod frontend;
pub mod generators;
pub mod logic;
pub mod qset;
pub mod relation;
pub mod scalar;
pub mod selftest;
pub mod structures;
pub mod subspace;

pub use qset::{Atom, QSet, QSetError};
pub use relation::{RelError, Relation};
pub use scalar::Scalar;
pub use subspace::{Comparison, Star, SubspaceError};

/// Double-precision subspace used by every layer above linear algebra.
pub type Subspace = subspace::Subspace<f64>;
/// Double-precision complex matrix.
pub type CMatrix = subspace::CMat<f64>;
pub use num_complex::Complex64;
