//! Quantum Hamming distance on n qubits.

use thiserror::Error;

use crate::qset::QSet;
use crate::relation::Relation;
use crate::structures::{MetricFamily, StructureError};
use crate::subspace::c;
use crate::{CMatrix, Subspace};

pub const MAX_QUBITS: usize = 4;

#[derive(Debug, Error)]
pub enum HammingError {
    #[error("quantum Hamming metric supports 1 to {MAX_QUBITS} qubits, requested {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Family(#[from] StructureError),
}

/// The four single-qubit Pauli matrices, identity first.
pub fn paulis() -> [CMatrix; 4] {
    let m = |e: [(f64, f64); 4]| CMatrix::from_row_slice(2, 2, &e.map(|(a, b)| c(a, b)));
    [
        m([(1., 0.), (0., 0.), (0., 0.), (1., 0.)]),
        m([(0., 0.), (1., 0.), (1., 0.), (0., 0.)]),
        m([(0., 0.), (0., -1.), (0., 1.), (0., 0.)]),
        m([(1., 0.), (0., 0.), (0., 0.), (-1., 0.)]),
    ]
}

/// Pauli strings on `n` qubits with exactly `k` non-identity factors.
pub fn pauli_strings(n: usize, k: usize) -> Vec<CMatrix> {
    let p = paulis();
    let mut out = Vec::new();
    for code in 0..4usize.pow(n as u32) {
        let digits: Vec<usize> = (0..n).map(|q| (code / 4usize.pow((n - 1 - q) as u32)) % 4).collect();
        if digits.iter().filter(|&&d| d != 0).count() != k {
            continue;
        }
        let m = digits
            .iter()
            .fold(CMatrix::identity(1, 1), |acc, &d| acc.kronecker(&p[d]));
        out.push(m);
    }
    out
}

/// Family `R_k` = span of weight-k Pauli strings on one atom of dimension 2^n.
pub fn quantum_hamming(n: usize) -> Result<MetricFamily, HammingError> {
    if n == 0 || n > MAX_QUBITS {
        return Err(HammingError::TooLarge(n));
    }
    let d = 1usize << n;
    let x = QSet::from_dims(&format!("Q{n}"), &[d]).expect("positive dimension");
    let entries = (0..=n)
        .map(|k| {
            let s = Subspace::span(&pauli_strings(n, k), d, d).expect("square matrices");
            let r = Relation::from_blocks(&x, &x, vec![(0, 0, s)]).expect("endo block");
            (k as f64, r)
        })
        .collect();
    Ok(MetricFamily::new(&x, entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_counting() {
        let h1 = quantum_hamming(1).unwrap();
        assert_eq!(h1.relations()[0].rank(), 1);
        assert_eq!(h1.relations()[1].rank(), 3);
        let h2 = quantum_hamming(2).unwrap();
        assert_eq!(h2.relations()[1].rank(), 6);
        assert_eq!(h2.up_to(1.0).unwrap().rank(), 7);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(quantum_hamming(0), Err(HammingError::TooLarge(0))));
        assert!(matches!(quantum_hamming(5), Err(HammingError::TooLarge(5))));
    }
}
