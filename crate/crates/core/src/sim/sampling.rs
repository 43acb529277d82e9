use std::io::Write;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::{Deserialize, Serialize};

use super::{hadamard, y_to_z, DensityMatrix, SimError};
use crate::circuit::{Pauli, PauliObservable};
use crate::rng::rng_from_seed;

/// Single-letter measurement basis shared by every qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn letter(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }

    /// Basis of an observable using one letter (identity counts as Z).
    pub fn of(obs: &PauliObservable) -> Option<Basis> {
        if obs.is_identity() {
            return Some(Basis::Z);
        }
        match obs.uniform_letter() {
            None => None,
            Some(Pauli::X) => Some(Basis::X),
            Some(Pauli::Y) => Some(Basis::Y),
            Some(Pauli::Z) => Some(Basis::Z),
            Some(Pauli::I) => unreachable!(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub observable: String,
    pub value: f64,
    pub shots: usize,
    pub seed: u64,
}

/// Rotate `rho` into `basis` (noiselessly) and draw `shots` bitstrings.
pub fn sample_bitstrings(
    rho: &DensityMatrix,
    basis: Basis,
    shots: usize,
    seed: u64,
) -> Result<Vec<usize>, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let probs = match basis {
        Basis::Z => rho.diagonal(),
        Basis::X | Basis::Y => {
            let u = if basis == Basis::X {
                hadamard()
            } else {
                y_to_z()
            };
            let mut r = rho.clone();
            for q in 0..r.num_qubits() {
                r.apply_unitary_1q(q, &u);
            }
            r.diagonal()
        }
    };
    let weights: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|_| SimError::BadDimension(weights.len()))?;
    let mut rng = rng_from_seed(seed);
    Ok((0..shots).map(|_| dist.sample(&mut rng)).collect())
}

/// Parity means of each observable over one shared sample set.
pub fn estimates_from_samples(
    samples: &[usize],
    observables: &[PauliObservable],
    seed: u64,
) -> Vec<ShotEstimate> {
    observables
        .iter()
        .map(|obs| {
            let mask: usize = obs.support().iter().map(|q| 1usize << q).sum();
            let plus = samples
                .iter()
                .filter(|&&b| (b & mask).count_ones().is_multiple_of(2))
                .count();
            let n = samples.len();
            ShotEstimate {
                observable: obs.label(),
                value: (2.0 * plus as f64 - n as f64) / n as f64,
                shots: n,
                seed,
            }
        })
        .collect()
}

/// Simultaneously estimate every observable of one basis from `shots` samples.
pub fn sample_pauli_group(
    rho: &DensityMatrix,
    basis: Basis,
    observables: &[PauliObservable],
    shots: usize,
    seed: u64,
) -> Result<Vec<ShotEstimate>, SimError> {
    for obs in observables {
        if obs.num_qubits() != rho.num_qubits() {
            return Err(SimError::DimensionMismatch {
                expected: rho.num_qubits(),
                found: obs.num_qubits(),
            });
        }
        if obs
            .paulis()
            .iter()
            .any(|&p| p != Pauli::I && p != basis.letter())
        {
            return Err(SimError::NotInBasis {
                observable: obs.label(),
                basis,
            });
        }
    }
    let samples = sample_bitstrings(rho, basis, shots, seed)?;
    if log::log_enabled!(target: "cdr_forge::samples", log::Level::Trace) {
        log::trace!(target: "cdr_forge::samples", "basis {basis:?} seed {seed}: {samples:?}");
    }
    Ok(estimates_from_samples(&samples, observables, seed))
}

/// CSV sample log: `shot,bitstring`, qubit 0 leftmost.
pub fn write_sample_log(path: &Path, samples: &[usize], num_qubits: usize) -> Result<(), SimError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "shot,bitstring")?;
    for (i, &b) in samples.iter().enumerate() {
        let bits: String = (0..num_qubits)
            .map(|q| if b >> q & 1 == 1 { '1' } else { '0' })
            .collect();
        writeln!(f, "{i},{bits}")?;
    }
    f.flush()?;
    Ok(())
}
