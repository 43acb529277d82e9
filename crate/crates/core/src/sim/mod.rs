//! Exact and noisy simulation plus finite-shot estimation.

mod density;
mod sampling;
mod statevector;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::Gate;

pub use density::{expectation_noisy, run_noisy, run_noisy_compiled, CompiledNoise, DensityMatrix};
pub use sampling::{
    estimates_from_samples, sample_bitstrings, sample_pauli_group, write_sample_log, Basis,
    ShotEstimate,
};
pub use statevector::{expectation_exact, run_exact, run_exact_capped, StateVector};

pub const MAX_STATEVECTOR_QUBITS: usize = 14;
pub const MAX_DENSITY_QUBITS: usize = 10;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{requested} qubits exceeds the simulator cap of {cap}")]
    QubitCap { requested: usize, cap: usize },
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is not a power of two ≥ 2")]
    BadDimension(usize),
    #[error("no {gate} channel for {location}")]
    MissingChannel { gate: String, location: String },
    #[error("observable {observable} is not diagonal in the {basis:?} basis")]
    NotInBasis { observable: String, basis: Basis },
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("sample log: {0}")]
    Io(#[from] std::io::Error),
}

/// 2×2 unitary of a one-qubit gate.
pub fn gate_matrix(gate: &Gate) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    match *gate {
        Gate::I(_) => [[o, z], [z, o]],
        Gate::X(_) => [[z, o], [o, z]],
        Gate::SX(_) => {
            let p = Complex64::new(0.5, 0.5);
            let m = Complex64::new(0.5, -0.5);
            [[p, m], [m, p]]
        }
        Gate::RZ { angle, .. } => {
            let lo = Complex64::from_polar(1.0, -angle / 2.0);
            [[lo, z], [z, lo.conj()]]
        }
        Gate::CNOT { .. } => panic!("CNOT is not a one-qubit gate"),
    }
}

/// Hadamard as a 2×2 matrix (measurement basis change only).
pub(crate) fn hadamard() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// `H·S†`, rotating the Y eigenbasis onto the computational basis.
pub(crate) fn y_to_z() -> [[Complex64; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a = Complex64::new(h, 0.0);
    let b = Complex64::new(0.0, -h);
    [[a, b], [a, -b]]
}
