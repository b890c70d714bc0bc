//! Structure generators: classical lifts, quantum Hamming metrics, dual groups, random data.

pub mod classical;
pub mod group;
pub mod hamming;
pub mod random;

pub use classical::{ClassicalError, ClassicalStructure, Lifted};
pub use group::{dual_group, GroupError, Irrep, IrrepData, QuantumGroupData};
pub use hamming::{quantum_hamming, HammingError};
