use num_complex::Complex64;

use super::{gate_matrix, SimError, MAX_STATEVECTOR_QUBITS};
use crate::circuit::{Circuit, Gate, PauliObservable};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Pure state of `num_qubits` qubits; amplitude `b` belongs to the basis
/// state whose bit `q` is the value of qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[0] = ONE;
        Self {
            num_qubits,
            amplitudes,
        }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(SimError::BadDimension(dim));
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::I(_) => {}
            Gate::X(q) => {
                let m = 1 << q;
                for b in 0..self.amplitudes.len() {
                    if b & m == 0 {
                        self.amplitudes.swap(b, b | m);
                    }
                }
            }
            Gate::RZ { qubit, angle } => self.apply_rz(qubit, angle),
            Gate::CNOT { control, target } => {
                let (mc, mt) = (1 << control, 1 << target);
                for b in 0..self.amplitudes.len() {
                    if b & mc != 0 && b & mt == 0 {
                        self.amplitudes.swap(b, b | mt);
                    }
                }
            }
            Gate::SX(q) => self.apply_single(q, &gate_matrix(gate)),
        }
    }

    /// Apply the inverse of `gate`.
    pub fn apply_inverse(&mut self, gate: &Gate) {
        match *gate {
            Gate::RZ { qubit, angle } => self.apply_rz(qubit, -angle),
            Gate::SX(q) => {
                let m = gate_matrix(gate);
                let adj = [
                    [m[0][0].conj(), m[1][0].conj()],
                    [m[0][1].conj(), m[1][1].conj()],
                ];
                self.apply_single(q, &adj);
            }
            _ => self.apply(gate),
        }
    }

    fn apply_rz(&mut self, qubit: usize, angle: f64) {
        let m = 1 << qubit;
        let lo = Complex64::from_polar(1.0, -angle / 2.0);
        let hi = lo.conj();
        for (b, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if b & m == 0 { lo } else { hi };
        }
    }

    pub(crate) fn apply_single(&mut self, q: usize, u: &[[Complex64; 2]; 2]) {
        let m = 1 << q;
        for b in 0..self.amplitudes.len() {
            if b & m == 0 {
                let a0 = self.amplitudes[b];
                let a1 = self.amplitudes[b | m];
                self.amplitudes[b] = u[0][0] * a0 + u[0][1] * a1;
                self.amplitudes[b | m] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    /// `P|ψ⟩` for a Pauli string `P`.
    pub fn apply_pauli(&self, obs: &PauliObservable) -> Result<StateVector, SimError> {
        if obs.num_qubits() != self.num_qubits {
            return Err(SimError::DimensionMismatch {
                expected: self.num_qubits,
                found: obs.num_qubits(),
            });
        }
        let (flip, phase_mask, ys) = obs.masks();
        let global = Complex64::i().powu(ys);
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (b, &a) in self.amplitudes.iter().enumerate() {
            let sign = if (b & phase_mask).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            out[b ^ flip] = global * a * sign;
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }
}

/// Run `circuit` on `|0…0⟩` with the default qubit cap.
pub fn run_exact(circuit: &Circuit) -> Result<StateVector, SimError> {
    run_exact_capped(circuit, MAX_STATEVECTOR_QUBITS)
}

pub fn run_exact_capped(circuit: &Circuit, cap: usize) -> Result<StateVector, SimError> {
    if circuit.num_qubits() > cap {
        return Err(SimError::QubitCap {
            requested: circuit.num_qubits(),
            cap,
        });
    }
    let mut state = StateVector::zero(circuit.num_qubits());
    for gate in circuit.gates() {
        state.apply(gate);
    }
    Ok(state)
}

/// `⟨ψ|P|ψ⟩`.
pub fn expectation_exact(state: &StateVector, obs: &PauliObservable) -> Result<f64, SimError> {
    if obs.num_qubits() != state.num_qubits {
        return Err(SimError::DimensionMismatch {
            expected: state.num_qubits,
            found: obs.num_qubits(),
        });
    }
    let (flip, phase_mask, ys) = obs.masks();
    let global = Complex64::i().powu(ys);
    let amps = &state.amplitudes;
    let mut acc = ZERO;
    for (b, &a) in amps.iter().enumerate() {
        let sign = if (b & phase_mask).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        acc += amps[b ^ flip].conj() * a * sign;
    }
    Ok((global * acc).re.clamp(-1.0, 1.0))
}
