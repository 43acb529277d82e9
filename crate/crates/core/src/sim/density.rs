use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use super::{SimError, MAX_DENSITY_QUBITS};
use crate::circuit::{Circuit, Gate, PauliObservable};
use crate::noise::{NoiseModel, NoisyGate, ProcessMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Mixed state on `num_qubits` qubits stored row-major, same bit order as
/// [`super::StateVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_product(states: &[Matrix2<Complex64>]) -> Self {
        let n = states.len();
        let dim = 1usize << n;
        let mut entries = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut v = Complex64::new(1.0, 0.0);
                for (q, s) in states.iter().enumerate() {
                    v *= s[((r >> q) & 1, (c >> q) & 1)];
                    if v == ZERO {
                        break;
                    }
                }
                entries[r * dim + c] = v;
            }
        }
        Self {
            num_qubits: n,
            entries,
        }
    }

    pub fn from_matrix(m: &DMatrix<Complex64>) -> Result<Self, SimError> {
        let dim = m.nrows();
        if dim < 2 || !dim.is_power_of_two() || m.ncols() != dim {
            return Err(SimError::BadDimension(dim));
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            entries: (0..dim * dim).map(|k| m[(k / dim, k % dim)]).collect(),
        })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &super::StateVector) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        let mut entries = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[r * dim + c] = a[r] * a[c].conj();
            }
        }
        Self {
            num_qubits: state.num_qubits(),
            entries,
        }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self {
            num_qubits,
            entries,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |r, c| self.entries[r * d + c])
    }

    pub fn trace(&self) -> Complex64 {
        let d = self.dim();
        (0..d).map(|i| self.entries[i * d + i]).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.entries[i * d + i].re).collect()
    }

    /// Largest `|ρ − ρ†|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst =
                    worst.max((self.entries[r * d + c] - self.entries[c * d + r].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.to_matrix()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with_pure(&self, state: &super::StateVector) -> f64 {
        let a = state.amplitudes();
        let d = self.dim();
        let mut acc = ZERO;
        for r in 0..d {
            let row: Complex64 = (0..d).map(|c| self.entries[r * d + c] * a[c]).sum();
            acc += a[r].conj() * row;
        }
        acc.re
    }

    /// `ρ ↦ UρU†` for a one-qubit unitary on `q`.
    pub(crate) fn apply_unitary_1q(&mut self, q: usize, u: &[[Complex64; 2]; 2]) {
        let d = self.dim();
        let m = 1 << q;
        // rows: ρ ← Uρ
        for r in 0..d {
            if r & m != 0 {
                continue;
            }
            for c in 0..d {
                let a0 = self.entries[r * d + c];
                let a1 = self.entries[(r | m) * d + c];
                self.entries[r * d + c] = u[0][0] * a0 + u[0][1] * a1;
                self.entries[(r | m) * d + c] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        // columns: ρ ← ρU†
        for r in 0..d {
            let row = &mut self.entries[r * d..(r + 1) * d];
            for c in 0..d {
                if c & m != 0 {
                    continue;
                }
                let a0 = row[c];
                let a1 = row[c | m];
                row[c] = a0 * u[0][0].conj() + a1 * u[0][1].conj();
                row[c | m] = a0 * u[1][0].conj() + a1 * u[1][1].conj();
            }
        }
    }

    fn apply_rz(&mut self, q: usize, angle: f64) {
        let d = self.dim();
        let m = 1 << q;
        // e^{-iθ/2} on |0⟩, e^{iθ/2} on |1⟩; only mixed-bit entries change
        let up = Complex64::from_polar(1.0, -angle);
        let down = up.conj();
        for r in 0..d {
            for c in 0..d {
                match (r & m != 0, c & m != 0) {
                    (false, true) => self.entries[r * d + c] *= up,
                    (true, false) => self.entries[r * d + c] *= down,
                    _ => {}
                }
            }
        }
    }

    fn apply_super_1q(&mut self, q: usize, s: &[Complex64]) {
        let d = self.dim();
        let m = 1 << q;
        for r in 0..d {
            if r & m != 0 {
                continue;
            }
            for c in 0..d {
                if c & m != 0 {
                    continue;
                }
                let idx = [
                    r * d + c,
                    r * d + (c | m),
                    (r | m) * d + c,
                    (r | m) * d + (c | m),
                ];
                let v = idx.map(|i| self.entries[i]);
                for (k, &i) in idx.iter().enumerate() {
                    let row = &s[k * 4..k * 4 + 4];
                    self.entries[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
                }
            }
        }
    }

    /// Local index `2·bit(first) + bit(second)`.
    fn apply_super_2q(&mut self, first: usize, second: usize, s: &[Complex64]) {
        let d = self.dim();
        let (mf, ms) = (1usize << first, 1usize << second);
        let offs = [0, ms, mf, mf | ms];
        let mut idx = [0usize; 16];
        let mut v = [ZERO; 16];
        for r in 0..d {
            if r & (mf | ms) != 0 {
                continue;
            }
            for c in 0..d {
                if c & (mf | ms) != 0 {
                    continue;
                }
                for a in 0..4 {
                    for b in 0..4 {
                        let i = (r | offs[a]) * d + (c | offs[b]);
                        idx[a * 4 + b] = i;
                        v[a * 4 + b] = self.entries[i];
                    }
                }
                for k in 0..16 {
                    let row = &s[k * 16..k * 16 + 16];
                    let mut acc = ZERO;
                    for j in 0..16 {
                        acc += row[j] * v[j];
                    }
                    self.entries[idx[k]] = acc;
                }
            }
        }
    }
}

/// Superoperators of every channel in a [`NoiseModel`], computed once.
#[derive(Debug, Clone)]
pub struct CompiledNoise {
    num_qubits: usize,
    one_qubit: BTreeMap<(NoisyGate, usize), Vec<Complex64>>,
    two_qubit: BTreeMap<(usize, usize), Vec<Complex64>>,
    initial: Vec<Matrix2<Complex64>>,
}

fn flatten(pm: &ProcessMatrix) -> Vec<Complex64> {
    let s = pm.superoperator();
    let n = s.nrows();
    (0..n * n).map(|k| s[(k / n, k % n)]).collect()
}

impl CompiledNoise {
    pub fn new(model: &NoiseModel) -> Self {
        Self {
            num_qubits: model.num_qubits(),
            one_qubit: model
                .one_qubit_channels()
                .map(|(k, pm)| (*k, flatten(pm)))
                .collect(),
            two_qubit: model
                .two_qubit_channels()
                .map(|(k, pm)| (*k, flatten(pm)))
                .collect(),
            initial: model.initial_state().to_vec(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }
}

/// Simulate `circuit` under `noise`, starting from its initial product state.
pub fn run_noisy(circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix, SimError> {
    run_noisy_compiled(circuit, &CompiledNoise::new(noise))
}

pub fn run_noisy_compiled(
    circuit: &Circuit,
    noise: &CompiledNoise,
) -> Result<DensityMatrix, SimError> {
    let n = circuit.num_qubits();
    if n > MAX_DENSITY_QUBITS {
        return Err(SimError::QubitCap {
            requested: n,
            cap: MAX_DENSITY_QUBITS,
        });
    }
    if n != noise.num_qubits {
        return Err(SimError::DimensionMismatch {
            expected: n,
            found: noise.num_qubits,
        });
    }
    let mut rho = DensityMatrix::from_product(&noise.initial);
    for gate in circuit.gates() {
        match *gate {
            Gate::RZ { qubit, angle } => rho.apply_rz(qubit, angle),
            Gate::CNOT { control, target } => {
                let s = noise.two_qubit.get(&(control, target)).ok_or_else(|| {
                    SimError::MissingChannel {
                        gate: "CNOT".into(),
                        location: format!("edge ({control}, {target})"),
                    }
                })?;
                rho.apply_super_2q(control, target, s);
            }
            _ => {
                let kind = NoisyGate::of(gate).expect("one-qubit noisy gate");
                let q = gate.target();
                let s =
                    noise
                        .one_qubit
                        .get(&(kind, q))
                        .ok_or_else(|| SimError::MissingChannel {
                            gate: gate.kind().to_string(),
                            location: format!("qubit {q}"),
                        })?;
                rho.apply_super_1q(q, s);
            }
        }
    }
    Ok(rho)
}

/// `Tr(ρP)`, clamped to `[−1, 1]`.
pub fn expectation_noisy(rho: &DensityMatrix, obs: &PauliObservable) -> Result<f64, SimError> {
    if obs.num_qubits() != rho.num_qubits {
        return Err(SimError::DimensionMismatch {
            expected: rho.num_qubits,
            found: obs.num_qubits(),
        });
    }
    let (flip, phase_mask, ys) = obs.masks();
    let d = rho.dim();
    let mut acc = ZERO;
    for x in 0..d {
        let v = rho.entries[x * d + (x ^ flip)];
        if (x & phase_mask).count_ones() % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Ok((Complex64::i().powu(ys) * acc).re.clamp(-1.0, 1.0))
}
