//! Shared fixtures for the benchmarks.

use pgrand_core::{build_parity_check, default_gate_budget, default_measured_qubits, sample_random_encoder, ParityCheckMatrix};

/// Parity checks of a default-budget random encoder.
pub fn fixture(n: usize, k: usize, seed: u64) -> ParityCheckMatrix {
    let c = sample_random_encoder(n, default_gate_budget(n), seed).expect("valid size");
    build_parity_check(&c, &default_measured_qubits(n, k)).expect("valid split")
}
