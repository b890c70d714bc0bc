//! Finite groups: classical lifts and dual quantum groups from irreducible representations.

use thiserror::Error;

use crate::qset::QSet;
use crate::relation::Relation;
use crate::subspace::{c, spectral_norm};
use crate::{CMatrix, Complex64, Subspace};

const TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group data invariant violated: {0}")]
    InvariantViolation(String),
}

fn bad(msg: String) -> GroupError {
    GroupError::InvariantViolation(msg)
}

/// One irreducible unitary representation, a matrix per group element.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub dim: usize,
    pub matrices: Vec<CMatrix>,
}

/// Complete list of irreducible representations of a finite group.
#[derive(Debug, Clone)]
pub struct IrrepData {
    pub group_order: usize,
    pub elements: Vec<String>,
    pub irreps: Vec<Irrep>,
}

/// A lifted finite group or monoid: the set, multiplication `X x X -> X` and unit `1 -> X`.
#[derive(Debug, Clone)]
pub struct QuantumGroupData {
    pub set: QSet,
    pub mult: Relation,
    pub unit: Relation,
}

impl IrrepData {
    /// Multiplication table recovered from the direct sum of all irreps, which is faithful.
    pub fn multiplication_table(&self) -> Result<Vec<Vec<usize>>, GroupError> {
        let n = self.group_order;
        let mut table = vec![vec![0; n]; n];
        for g in 0..n {
            for h in 0..n {
                let prods: Vec<CMatrix> = self.irreps.iter().map(|r| &r.matrices[g] * &r.matrices[h]).collect();
                let hit = (0..n).find(|&k| {
                    self.irreps
                        .iter()
                        .zip(&prods)
                        .all(|(r, p)| spectral_norm(&(p - &r.matrices[k])) <= TOL)
                });
                table[g][h] = hit.ok_or_else(|| {
                    bad(format!(
                        "product of `{}` and `{}` is not represented by any element",
                        self.elements[g], self.elements[h]
                    ))
                })?;
            }
        }
        Ok(table)
    }

    /// Checks shapes, unitarity, the dimension count, a unique trivial irrep and multiplicativity.
    pub fn validate(&self) -> Result<Vec<Vec<usize>>, GroupError> {
        let n = self.group_order;
        if n == 0 || self.elements.len() != n {
            return Err(bad(format!("{} element labels for group order {n}", self.elements.len())));
        }
        let mut dim2 = 0;
        let mut trivial = 0;
        for (k, r) in self.irreps.iter().enumerate() {
            if r.dim == 0 || r.matrices.len() != n {
                return Err(bad(format!("irrep {k} has dimension {} and {} matrices", r.dim, r.matrices.len())));
            }
            for (g, m) in r.matrices.iter().enumerate() {
                if m.shape() != (r.dim, r.dim) {
                    return Err(bad(format!("irrep {k} at `{}` is not {} x {}", self.elements[g], r.dim, r.dim)));
                }
                let e = spectral_norm(&(m.adjoint() * m - CMatrix::identity(r.dim, r.dim)));
                if e > TOL {
                    return Err(bad(format!("irrep {k} at `{}` is not unitary", self.elements[g])));
                }
            }
            dim2 += r.dim * r.dim;
            if r.dim == 1 && r.matrices.iter().all(|m| (m[(0, 0)] - c(1.0, 0.0)).norm() <= TOL) {
                trivial += 1;
            }
        }
        if dim2 != n {
            return Err(bad(format!("sum of squared dimensions is {dim2}, group order is {n}")));
        }
        if trivial != 1 {
            return Err(bad(format!("expected exactly one trivial irrep, found {trivial}")));
        }
        let table = self.multiplication_table()?;
        for r in &self.irreps {
            for g in 0..n {
                for h in 0..n {
                    let e = spectral_norm(&(&r.matrices[g] * &r.matrices[h] - &r.matrices[table[g][h]]));
                    if e > TOL {
                        return Err(bad("an irrep is not multiplicative".into()));
                    }
                }
            }
        }
        Ok(table)
    }

    fn trivial_index(&self) -> usize {
        self.irreps
            .iter()
            .position(|r| r.dim == 1 && r.matrices.iter().all(|m| (m[(0, 0)] - c(1.0, 0.0)).norm() <= TOL))
            .expect("validated")
    }
}

/// Space of `v: V_i ⊗ V_j -> V_k` with `v (π_i ⊗ π_j)(g) = π_k(g) v` for all `g`,
/// obtained by averaging `π_k(g) E (π_i ⊗ π_j)(g)^{-1}` over the group for every matrix unit `E`.
pub fn intertwiners(pi: &Irrep, pj: &Irrep, pk: &Irrep) -> Subspace {
    let (rows, cols) = (pk.dim, pi.dim * pj.dim);
    let n = pi.matrices.len();
    let tensors: Vec<CMatrix> = (0..n).map(|g| pi.matrices[g].kronecker(&pj.matrices[g])).collect();
    let mut gens = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for s in 0..cols {
            let mut acc = CMatrix::zeros(rows, cols);
            for g in 0..n {
                // columns of the tensor product are unitary, so the inverse is the adjoint
                acc += &pk.matrices[g].column(r) * tensors[g].column(s).adjoint();
            }
            gens.push(acc / Complex64::new(n as f64, 0.0));
        }
    }
    Subspace::span(&gens, rows, cols).expect("matching shapes")
}

/// Dual quantum group: one atom per irrep, multiplication blocks are intertwiner spaces.
pub fn dual_group(d: &IrrepData) -> Result<QuantumGroupData, GroupError> {
    dual_group_named(d, "Dual")
}

/// As `dual_group`, with the quantum set called `name`.
pub fn dual_group_named(d: &IrrepData, name: &str) -> Result<QuantumGroupData, GroupError> {
    d.validate()?;
    let labels: Vec<(String, usize)> = d.irreps.iter().enumerate().map(|(k, r)| (format!("pi{k}"), r.dim)).collect();
    let x = QSet::atoms(name, &labels).map_err(|e| bad(e.to_string()))?;
    let xx = x.product(&x);
    let m = d.irreps.len();
    let mult = Relation::from_fn(&xx, &x, |p, k| intertwiners(&d.irreps[p / m], &d.irreps[p % m], &d.irreps[k]));
    let unit = Relation::from_blocks(&QSet::unit(), &x, vec![(0, d.trivial_index(), Subspace::full(1, 1))])
        .map_err(|e| bad(e.to_string()))?;
    Ok(QuantumGroupData { set: x, mult, unit })
}

/// Lifts a finite magma with a chosen unit to classical relations.
pub fn lift_monoid(name: &str, labels: &[String], table: &[Vec<usize>], unit: usize) -> Result<QuantumGroupData, GroupError> {
    let n = labels.len();
    if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) || unit >= n {
        return Err(bad(format!("multiplication table of `{name}` is not {n} x {n} over its elements")));
    }
    let x = QSet::classical(name, labels).map_err(|e| bad(e.to_string()))?;
    let xx = x.product(&x);
    let mult = Relation::from_fn(&xx, &x, |p, k| {
        if table[p / n][p % n] == k {
            Subspace::full(1, 1)
        } else {
            Subspace::zero(1, 1)
        }
    });
    let unit = Relation::from_blocks(&QSet::unit(), &x, vec![(0, unit, Subspace::full(1, 1))]).expect("1 x 1 block");
    Ok(QuantumGroupData { set: x, mult, unit })
}

/// Irreps of the cyclic group of order `n`: `k ↦ e^{2πi jk/n}` for `j = 0..n`.
pub fn cyclic_irreps(n: usize) -> IrrepData {
    let irreps = (0..n)
        .map(|j| Irrep {
            dim: 1,
            matrices: (0..n)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
                    CMatrix::from_element(1, 1, Complex64::from_polar(1.0, t))
                })
                .collect(),
        })
        .collect();
    IrrepData {
        group_order: n,
        elements: (0..n).map(|k| k.to_string()).collect(),
        irreps,
    }
}

/// Cyclic group of order `n` lifted to a classical set.
pub fn cyclic_group(n: usize) -> QuantumGroupData {
    let labels: Vec<String> = (0..n).map(|k| k.to_string()).collect();
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    lift_monoid(&format!("Z{n}"), &labels, &table, 0).expect("valid table")
}

/// Permutations of {0,1,2} in lexicographic order of their one-line notation.
pub fn s3_elements() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

fn s3_labels() -> Vec<String> {
    s3_elements()
        .iter()
        .map(|p| p.iter().map(|i| (i + 1).to_string()).collect())
        .collect()
}

/// Composition `(g h)(i) = g(h(i))`.
fn s3_table() -> Vec<Vec<usize>> {
    let els = s3_elements();
    els.iter()
        .map(|g| {
            els.iter()
                .map(|h| {
                    let gh = [g[h[0]], g[h[1]], g[h[2]]];
                    els.iter().position(|p| *p == gh).expect("closed")
                })
                .collect()
        })
        .collect()
}

/// The symmetric group on three letters lifted to a classical set.
pub fn s3_group() -> QuantumGroupData {
    lift_monoid("S3", &s3_labels(), &s3_table(), 0).expect("valid table")
}

/// Trivial, sign and standard irreps of the symmetric group on three letters.
pub fn s3_irreps() -> IrrepData {
    let els = s3_elements();
    let (a, b) = (std::f64::consts::FRAC_1_SQRT_2, 1.0 / 6f64.sqrt());
    // orthonormal basis of the sum-zero plane in C^3
    let basis = CMatrix::from_row_slice(3, 2, &[c(a, 0.), c(b, 0.), c(-a, 0.), c(b, 0.), c(0., 0.), c(-2. * b, 0.)]);
    let perm = |p: &[usize; 3]| CMatrix::from_fn(3, 3, |i, j| if p[j] == i { c(1., 0.) } else { c(0., 0.) });
    let sign = |p: &[usize; 3]| {
        let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        if inv % 2 == 0 { 1.0 } else { -1.0 }
    };
    let one = |z: f64| CMatrix::from_element(1, 1, c(z, 0.0));
    IrrepData {
        group_order: 6,
        elements: s3_labels(),
        irreps: vec![
            Irrep { dim: 1, matrices: els.iter().map(|_| one(1.0)).collect() },
            Irrep { dim: 1, matrices: els.iter().map(|p| one(sign(p))).collect() },
            Irrep {
                dim: 2,
                matrices: els.iter().map(|p| basis.adjoint() * perm(p) * &basis).collect(),
            },
        ],
    }
}

/// `({0, 1}, max)` with unit 0: a monoid without inverses.
pub fn max_monoid() -> QuantumGroupData {
    let labels = vec!["0".to_string(), "1".to_string()];
    lift_monoid("M", &labels, &[vec![0, 1], vec![1, 1]], 0).expect("valid table")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_data_is_valid() {
        let t = s3_irreps().validate().unwrap();
        assert_eq!(t, s3_table());
        cyclic_irreps(4).validate().unwrap();
    }

    #[test]
    fn standard_squared_contains_trivial_once() {
        let d = s3_irreps();
        let s = intertwiners(&d.irreps[2], &d.irreps[2], &d.irreps[0]);
        assert_eq!(s.rank(), 1);
        assert_eq!(intertwiners(&d.irreps[2], &d.irreps[2], &d.irreps[2]).rank(), 1);
        assert_eq!(intertwiners(&d.irreps[0], &d.irreps[1], &d.irreps[0]).rank(), 0);
    }

    #[test]
    fn broken_irreps_rejected() {
        let mut d = s3_irreps();
        d.irreps.pop();
        assert!(d.validate().is_err());
        let mut d = cyclic_irreps(3);
        d.irreps[1].matrices.swap(1, 2);
        d.irreps[2].matrices.swap(0, 1);
        assert!(d.validate().is_err());
    }
}
