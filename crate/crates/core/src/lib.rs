//! Random Clifford encoders, GRAND syndrome decoding and entanglement purification models.

pub mod analytic;
pub mod clifford;
pub mod compare;
pub mod decoder;
pub mod error;
pub mod noise;
pub mod numeric;
pub mod pauli;
pub mod sim;

pub use clifford::{
    build_parity_check, default_gate_budget, default_measured_qubits, sample_random_encoder, CliffordCircuit,
    CliffordGate, ParityCheckMatrix, SyndromeColumns,
};
pub use decoder::{build_table, build_table_with, resume_table, BuildOptions, Provenance, SyndromeTable};
pub use error::{Error, Result};
pub use noise::{enumerate_patterns, sample_error, BellDiagonalState, DepolarizingParams};
pub use pauli::{BitMatrix, BitString, Pauli, PauliString};
