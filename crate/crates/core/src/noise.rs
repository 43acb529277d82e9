//! Noise models built from Pauli transfer matrices (PTMs).
//!
//! A noisy gate channel is the convex mixture
//! `p · base + (1 − p) · perfect` of a noisy base process and the ideal
//! gate, with `p` drawn per qubit (one-qubit gates, state preparation) or per
//! edge (CNOT). `RZ` is always perfect and has no channel.
//!
//! PTM convention: entry `(i, j)` is `Tr(P_i E(P_j)) / d` with Paulis ordered
//! `I, X, Y, Z`. For two-qubit channels the Pauli index is `4·a + b` where
//! `a` acts on the first qubit of the edge (the CNOT control) and `b` on the
//! second.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Gate, GateKind};
use crate::rng::rng_from_seed;
use crate::sim::gate_matrix;

#[derive(Debug, Error)]
pub enum NoiseError {
    #[error("mixing weight {0} outside [0, 1]")]
    WeightOutOfRange(f64),
    #[error("channel shapes differ: {0} vs {1} qubits")]
    ShapeMismatch(usize, usize),
    #[error("invalid probability range [{lo}, {hi}]")]
    BadRange { lo: f64, hi: f64 },
    #[error("empty topology for a {0}-qubit model")]
    EmptyTopology(usize),
    #[error("edge ({0}, {1}) is invalid for {2} qubits")]
    BadEdge(usize, usize, usize),
    #[error("qubit {0} out of range for {1} qubits")]
    BadQubit(usize, usize),
    #[error("PTM must be {expected}x{expected}, got {rows}x{cols}")]
    BadPtmShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("gate {0} cannot carry a one-qubit channel")]
    BadGate(String),
    #[error("initial state for qubit {qubit} is not a density matrix: {reason}")]
    BadInitialState { qubit: usize, reason: String },
    #[error("channel for {what} fails CPTP check: {diagnostics:?}")]
    NotCptp {
        what: String,
        diagnostics: CptpDiagnostics,
    },
    #[error("channel file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("channel file: {0}")]
    Io(#[from] std::io::Error),
}

pub(crate) fn pauli_matrix(index: usize) -> Matrix2<Complex64> {
    let (z, o, i) = (
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    );
    match index {
        0 => Matrix2::new(o, z, z, o),
        1 => Matrix2::new(z, o, o, z),
        2 => Matrix2::new(z, -i, i, z),
        3 => Matrix2::new(o, z, z, -o),
        _ => unreachable!("Pauli index {index}"),
    }
}

/// Pauli string matrix on `n ∈ {1, 2}` qubits, local basis index
/// `2·bit(first) + bit(second)` for two qubits.
fn pauli_string_matrix(n: usize, index: usize) -> DMatrix<Complex64> {
    match n {
        1 => {
            let p = pauli_matrix(index);
            DMatrix::from_fn(2, 2, |r, c| p[(r, c)])
        }
        2 => {
            let a = pauli_matrix(index / 4);
            let b = pauli_matrix(index % 4);
            DMatrix::from_fn(4, 4, |r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
        }
        _ => unreachable!("only 1- and 2-qubit channels are supported"),
    }
}

/// Real Pauli-transfer-matrix representation of a 1- or 2-qubit channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessMatrix {
    num_qubits: usize,
    ptm: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CptpDiagnostics {
    /// Largest deviation of the first PTM row from `(1, 0, …, 0)`.
    pub trace_residual: f64,
    /// Smallest eigenvalue of the Choi matrix (normalized to unit trace · d).
    pub min_choi_eigenvalue: f64,
    pub passed: bool,
}

impl ProcessMatrix {
    pub fn new(num_qubits: usize, ptm: DMatrix<f64>) -> Result<Self, NoiseError> {
        let expected = match num_qubits {
            1 => 4,
            2 => 16,
            _ => {
                return Err(NoiseError::BadPtmShape {
                    expected: 0,
                    rows: ptm.nrows(),
                    cols: ptm.ncols(),
                })
            }
        };
        if ptm.nrows() != expected || ptm.ncols() != expected {
            return Err(NoiseError::BadPtmShape {
                expected,
                rows: ptm.nrows(),
                cols: ptm.ncols(),
            });
        }
        Ok(Self { num_qubits, ptm })
    }

    pub fn identity(num_qubits: usize) -> Self {
        let d = 4usize.pow(num_qubits as u32);
        Self {
            num_qubits,
            ptm: DMatrix::identity(d, d),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ptm(&self) -> &DMatrix<f64> {
        &self.ptm
    }

    fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    /// PTM of the unitary channel `ρ ↦ UρU†`.
    pub fn from_unitary(u: &DMatrix<Complex64>) -> Self {
        let d = u.nrows();
        let n = d.trailing_zeros() as usize;
        let paulis: Vec<_> = (0..d * d).map(|i| pauli_string_matrix(n, i)).collect();
        let u_adj = u.adjoint();
        let ptm = DMatrix::from_fn(d * d, d * d, |i, j| {
            let m = &paulis[i] * u * &paulis[j] * &u_adj;
            m.trace().re / d as f64
        });
        Self { num_qubits: n, ptm }
    }

    /// Ideal channel of a native gate (`RZ` included, for completeness).
    pub fn perfect(gate: &Gate) -> Self {
        let u = match gate {
            Gate::CNOT { .. } => {
                // local index 2·control + target
                let mut m = DMatrix::<Complex64>::zeros(4, 4);
                let one = Complex64::new(1.0, 0.0);
                m[(0, 0)] = one;
                m[(1, 1)] = one;
                m[(2, 3)] = one;
                m[(3, 2)] = one;
                m
            }
            _ => {
                let g = gate_matrix(gate);
                DMatrix::from_fn(2, 2, |r, c| g[r][c])
            }
        };
        Self::from_unitary(&u)
    }

    /// Uniform depolarizing channel `ρ ↦ (1 − λ)ρ + λ·I/d` on all qubits.
    pub fn depolarizing(num_qubits: usize, rate: f64) -> Self {
        let d2 = 4usize.pow(num_qubits as u32);
        let mut ptm = DMatrix::identity(d2, d2) * (1.0 - rate);
        ptm[(0, 0)] = 1.0;
        Self { num_qubits, ptm }
    }

    /// Single-qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Self {
        let s = (1.0 - gamma).sqrt();
        #[rustfmt::skip]
        let ptm = DMatrix::from_row_slice(4, 4, &[
            1.0,   0.0, 0.0, 0.0,
            0.0,   s,   0.0, 0.0,
            0.0,   0.0, s,   0.0,
            gamma, 0.0, 0.0, 1.0 - gamma,
        ]);
        Self { num_qubits: 1, ptm }
    }

    /// Tensor product `self ⊗ other` (self on the first qubit).
    pub fn tensor(&self, other: &ProcessMatrix) -> Self {
        Self {
            num_qubits: self.num_qubits + other.num_qubits,
            ptm: self.ptm.kronecker(&other.ptm),
        }
    }

    /// Channel `after ∘ self` (apply `self` first).
    pub fn then(&self, after: &ProcessMatrix) -> Result<Self, NoiseError> {
        if self.num_qubits != after.num_qubits {
            return Err(NoiseError::ShapeMismatch(self.num_qubits, after.num_qubits));
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            ptm: &after.ptm * &self.ptm,
        })
    }

    /// Computational-basis superoperator `S` with
    /// `vec(E(ρ))[a·d + b] = Σ S[(a·d + b), (c·d + e)] · ρ[c, e]`.
    pub fn superoperator(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let d2 = d * d;
        let paulis: Vec<_> = (0..d2)
            .map(|i| pauli_string_matrix(self.num_qubits, i))
            .collect();
        let mut s = DMatrix::<Complex64>::zeros(d2, d2);
        for i in 0..d2 {
            for j in 0..d2 {
                let r = self.ptm[(i, j)];
                if r == 0.0 {
                    continue;
                }
                let w = r / d as f64;
                for a in 0..d {
                    for b in 0..d {
                        let pi = paulis[i][(a, b)];
                        if pi == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for c in 0..d {
                            for e in 0..d {
                                // Tr(P_j ρ) = Σ_{c,e} P_j[e, c] ρ[c, e]
                                let pj = paulis[j][(e, c)];
                                s[(a * d + b, c * d + e)] += pi * pj * w;
                            }
                        }
                    }
                }
            }
        }
        s
    }

    /// Choi matrix `Σ_{c,e} |c⟩⟨e| ⊗ E(|c⟩⟨e|)`.
    pub fn choi(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let s = self.superoperator();
        DMatrix::from_fn(d * d, d * d, |row, col| {
            let (c, a) = (row / d, row % d);
            let (e, b) = (col / d, col % d);
            s[(a * d + b, c * d + e)]
        })
    }

    /// Apply the channel to a local `d × d` density matrix.
    pub fn apply_to(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let d = self.dim();
        let s = self.superoperator();
        let v = DMatrix::from_fn(d * d, 1, |k, _| rho[(k / d, k % d)]);
        let w = s * v;
        DMatrix::from_fn(d, d, |a, b| w[(a * d + b, 0)])
    }
}

/// Trace-preservation and complete-positivity diagnostics.
pub fn validate_cptp(pm: &ProcessMatrix, tol: f64) -> CptpDiagnostics {
    let n = pm.ptm.ncols();
    let trace_residual = (0..n)
        .map(|j| (pm.ptm[(0, j)] - if j == 0 { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let eig = pm.choi().symmetric_eigenvalues();
    let min_choi_eigenvalue = eig.iter().copied().fold(f64::INFINITY, f64::min);
    CptpDiagnostics {
        trace_residual,
        min_choi_eigenvalue,
        passed: trace_residual <= tol && min_choi_eigenvalue >= -tol,
    }
}

/// Default tolerance for [`validate_cptp`] used when building models.
pub const CPTP_TOLERANCE: f64 = 1e-8;

/// `p · base + (1 − p) · perfect`.
pub fn mix_channel(
    base: &ProcessMatrix,
    perfect: &ProcessMatrix,
    p: f64,
) -> Result<ProcessMatrix, NoiseError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(NoiseError::WeightOutOfRange(p));
    }
    if base.num_qubits != perfect.num_qubits {
        return Err(NoiseError::ShapeMismatch(
            base.num_qubits,
            perfect.num_qubits,
        ));
    }
    Ok(ProcessMatrix {
        num_qubits: base.num_qubits,
        ptm: &base.ptm * p + &perfect.ptm * (1.0 - p),
    })
}

/// One-qubit gates that carry a noise channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NoisyGate {
    SX,
    X,
    I,
}

impl NoisyGate {
    pub const ALL: [NoisyGate; 3] = [NoisyGate::SX, NoisyGate::X, NoisyGate::I];

    pub fn of(gate: &Gate) -> Option<Self> {
        match gate.kind() {
            GateKind::SX => Some(NoisyGate::SX),
            GateKind::X => Some(NoisyGate::X),
            GateKind::I => Some(NoisyGate::I),
            _ => None,
        }
    }

    fn gate(self, q: usize) -> Gate {
        match self {
            NoisyGate::SX => Gate::SX(q),
            NoisyGate::X => Gate::X(q),
            NoisyGate::I => Gate::I(q),
        }
    }
}

/// Parameters of the reproducible surrogate base channels: the ideal gate
/// followed by depolarizing noise and per-qubit amplitude damping, plus a
/// thermal-like preparation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SurrogateFamily {
    pub depolarizing_1q: f64,
    pub depolarizing_2q: f64,
    pub amplitude_damping: f64,
    /// Excited-state population of the base preparation state.
    pub prep_excited: f64,
}

impl Default for SurrogateFamily {
    fn default() -> Self {
        Self {
            depolarizing_1q: 0.01,
            depolarizing_2q: 0.1,
            amplitude_damping: 0.01,
            prep_excited: 0.02,
        }
    }
}

impl SurrogateFamily {
    pub fn one_qubit_base(&self, gate: NoisyGate) -> ProcessMatrix {
        let ideal = ProcessMatrix::perfect(&gate.gate(0));
        ideal
            .then(&ProcessMatrix::depolarizing(1, self.depolarizing_1q))
            .and_then(|c| c.then(&ProcessMatrix::amplitude_damping(self.amplitude_damping)))
            .expect("one-qubit shapes agree")
    }

    pub fn cnot_base(&self) -> ProcessMatrix {
        let ideal = ProcessMatrix::perfect(&Gate::CNOT {
            control: 0,
            target: 1,
        });
        let ad = ProcessMatrix::amplitude_damping(self.amplitude_damping);
        ideal
            .then(&ProcessMatrix::depolarizing(2, self.depolarizing_2q))
            .and_then(|c| c.then(&ad.tensor(&ad)))
            .expect("two-qubit shapes agree")
    }

    pub fn prep_base(&self) -> Matrix2<Complex64> {
        diag_state(1.0 - self.prep_excited, self.prep_excited)
    }
}

fn diag_state(p0: f64, p1: f64) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(p0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(p1, 0.0),
    )
}

/// Mixing weights drawn for a model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Mixing {
    pub qubits: Vec<f64>,
    pub edges: BTreeMap<(usize, usize), f64>,
}

/// Per-qubit and per-edge channels plus a product initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    num_qubits: usize,
    one_qubit: BTreeMap<(NoisyGate, usize), ProcessMatrix>,
    two_qubit: BTreeMap<(usize, usize), ProcessMatrix>,
    initial_state: Vec<Matrix2<Complex64>>,
    mixing: Mixing,
}

impl NoiseModel {
    /// All channels ideal on every qubit and ordered pair; `|0…0⟩` start.
    pub fn perfect(num_qubits: usize) -> Self {
        let mut one_qubit = BTreeMap::new();
        for q in 0..num_qubits {
            for g in NoisyGate::ALL {
                one_qubit.insert((g, q), ProcessMatrix::perfect(&g.gate(0)));
            }
        }
        let mut two_qubit = BTreeMap::new();
        let cnot = ProcessMatrix::perfect(&Gate::CNOT {
            control: 0,
            target: 1,
        });
        for c in 0..num_qubits {
            for t in 0..num_qubits {
                if c != t {
                    two_qubit.insert((c, t), cnot.clone());
                }
            }
        }
        Self {
            num_qubits,
            one_qubit,
            two_qubit,
            initial_state: vec![diag_state(1.0, 0.0); num_qubits],
            mixing: Mixing {
                qubits: vec![0.0; num_qubits],
                edges: BTreeMap::new(),
            },
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn one_qubit_channel(&self, gate: NoisyGate, qubit: usize) -> Option<&ProcessMatrix> {
        self.one_qubit.get(&(gate, qubit))
    }

    pub fn cnot_channel(&self, control: usize, target: usize) -> Option<&ProcessMatrix> {
        self.two_qubit.get(&(control, target))
    }

    pub fn one_qubit_channels(
        &self,
    ) -> impl Iterator<Item = (&(NoisyGate, usize), &ProcessMatrix)> {
        self.one_qubit.iter()
    }

    pub fn two_qubit_channels(&self) -> impl Iterator<Item = (&(usize, usize), &ProcessMatrix)> {
        self.two_qubit.iter()
    }

    pub fn initial_state(&self) -> &[Matrix2<Complex64>] {
        &self.initial_state
    }

    pub fn mixing(&self) -> &Mixing {
        &self.mixing
    }

    /// Replace or add a one-qubit channel.
    pub fn set_one_qubit_channel(
        &mut self,
        gate: NoisyGate,
        qubit: usize,
        pm: ProcessMatrix,
    ) -> Result<(), NoiseError> {
        if qubit >= self.num_qubits {
            return Err(NoiseError::BadQubit(qubit, self.num_qubits));
        }
        if pm.num_qubits != 1 {
            return Err(NoiseError::ShapeMismatch(1, pm.num_qubits));
        }
        self.one_qubit.insert((gate, qubit), pm);
        Ok(())
    }

    pub fn set_cnot_channel(
        &mut self,
        control: usize,
        target: usize,
        pm: ProcessMatrix,
    ) -> Result<(), NoiseError> {
        if control >= self.num_qubits || target >= self.num_qubits || control == target {
            return Err(NoiseError::BadEdge(control, target, self.num_qubits));
        }
        if pm.num_qubits != 2 {
            return Err(NoiseError::ShapeMismatch(2, pm.num_qubits));
        }
        self.two_qubit.insert((control, target), pm);
        Ok(())
    }

    pub fn set_initial_state(
        &mut self,
        qubit: usize,
        rho: Matrix2<Complex64>,
    ) -> Result<(), NoiseError> {
        if qubit >= self.num_qubits {
            return Err(NoiseError::BadQubit(qubit, self.num_qubits));
        }
        check_qubit_state(qubit, &rho)?;
        self.initial_state[qubit] = rho;
        Ok(())
    }

    /// Overlay every channel and initial state present in `file`.
    pub fn apply_overrides(&mut self, file: &ChannelFile) -> Result<(), NoiseError> {
        let other = NoiseModel::from_channel_file_partial(file, Some(self.clone()))?;
        *self = other;
        Ok(())
    }

    /// CPTP diagnostics for every channel, keyed by a readable name.
    pub fn diagnostics(&self, tol: f64) -> Vec<(String, CptpDiagnostics)> {
        let mut out = Vec::new();
        for ((g, q), pm) in &self.one_qubit {
            out.push((format!("{g:?}[{q}]"), validate_cptp(pm, tol)));
        }
        for ((c, t), pm) in &self.two_qubit {
            out.push((format!("CNOT[{c},{t}]"), validate_cptp(pm, tol)));
        }
        out
    }

    pub fn from_channel_file(file: &ChannelFile) -> Result<Self, NoiseError> {
        Self::from_channel_file_partial(file, None)
    }

    fn from_channel_file_partial(
        file: &ChannelFile,
        start: Option<NoiseModel>,
    ) -> Result<Self, NoiseError> {
        let mut model = match start {
            Some(m) => m,
            None => {
                // Channels absent from a standalone file stay absent.
                let mut m = NoiseModel::perfect(file.qubits);
                m.one_qubit.clear();
                m.two_qubit.clear();
                m
            }
        };
        if file.qubits != model.num_qubits {
            return Err(NoiseError::BadQubit(file.qubits, model.num_qubits));
        }
        for entry in &file.one_qubit {
            let gate = match entry.gate.as_str() {
                "SX" => NoisyGate::SX,
                "X" => NoisyGate::X,
                "I" => NoisyGate::I,
                other => return Err(NoiseError::BadGate(other.into())),
            };
            let pm = ProcessMatrix::new(1, rows_to_matrix(&entry.ptm)?)?;
            model.set_one_qubit_channel(gate, entry.qubit, pm)?;
        }
        for entry in &file.two_qubit {
            let pm = ProcessMatrix::new(2, rows_to_matrix(&entry.ptm)?)?;
            model.set_cnot_channel(entry.edge[0], entry.edge[1], pm)?;
        }
        for entry in &file.initial_state {
            let c = |k: usize| Complex64::new(entry.rho[k][0], entry.rho[k][1]);
            let rho = Matrix2::new(c(0), c(1), c(2), c(3));
            model.set_initial_state(entry.qubit, rho)?;
        }
        if let Some(m) = &file.mixing {
            model.mixing = Mixing {
                qubits: m.qubits.clone(),
                edges: m
                    .edges
                    .iter()
                    .map(|e| ((e.edge[0], e.edge[1]), e.p))
                    .collect(),
            };
        }
        Ok(model)
    }

    pub fn to_channel_file(&self) -> ChannelFile {
        ChannelFile {
            qubits: self.num_qubits,
            one_qubit: self
                .one_qubit
                .iter()
                .map(|((g, q), pm)| OneQubitEntry {
                    gate: format!("{g:?}"),
                    qubit: *q,
                    ptm: matrix_to_rows(&pm.ptm),
                })
                .collect(),
            two_qubit: self
                .two_qubit
                .iter()
                .map(|((c, t), pm)| TwoQubitEntry {
                    edge: [*c, *t],
                    ptm: matrix_to_rows(&pm.ptm),
                })
                .collect(),
            initial_state: self
                .initial_state
                .iter()
                .enumerate()
                .map(|(q, rho)| InitialStateEntry {
                    qubit: q,
                    rho: [rho[(0, 0)], rho[(0, 1)], rho[(1, 0)], rho[(1, 1)]].map(|z| [z.re, z.im]),
                })
                .collect(),
            mixing: Some(MixingEntry {
                qubits: self.mixing.qubits.clone(),
                edges: self
                    .mixing
                    .edges
                    .iter()
                    .map(|(&(i, j), &p)| EdgeWeight { edge: [i, j], p })
                    .collect(),
            }),
        }
    }

    pub fn load(path: &Path) -> Result<Self, NoiseError> {
        let text = std::fs::read_to_string(path)?;
        let file: ChannelFile = serde_json::from_str(&text)?;
        Self::from_channel_file(&file)
    }

    pub fn save(&self, path: &Path) -> Result<(), NoiseError> {
        let text = serde_json::to_string_pretty(&self.to_channel_file())?;
        std::fs::write(path, text)?;
        Ok(())
    }
}

fn check_qubit_state(qubit: usize, rho: &Matrix2<Complex64>) -> Result<(), NoiseError> {
    let bad = |reason: &str| NoiseError::BadInitialState {
        qubit,
        reason: reason.into(),
    };
    if ((rho[(0, 0)] + rho[(1, 1)]).re - 1.0).abs() > 1e-10 {
        return Err(bad("trace is not 1"));
    }
    if (rho - rho.adjoint()).norm() > 1e-10 {
        return Err(bad("not Hermitian"));
    }
    let eig = rho.symmetric_eigenvalues();
    if eig.iter().any(|&e| e < -1e-10) {
        return Err(bad("negative eigenvalue"));
    }
    Ok(())
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>, NoiseError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(NoiseError::BadPtmShape {
            expected: n,
            rows: n,
            cols: rows.first().map_or(0, Vec::len),
        });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Draw mixing weights uniformly from `p_range` and build the mixed model.
///
/// Weights are drawn in a fixed order: one per qubit (shared by that
/// qubit's SX, X, I channels and its preparation), then one per undirected
/// edge of `topology`. Both CNOT directions of an edge share the weight.
pub fn build_random_model(
    num_qubits: usize,
    topology: &[(usize, usize)],
    family: &SurrogateFamily,
    p_range: (f64, f64),
    seed: u64,
) -> Result<NoiseModel, NoiseError> {
    let (lo, hi) = p_range;
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(NoiseError::BadRange { lo, hi });
    }
    if num_qubits >= 2 && topology.is_empty() {
        return Err(NoiseError::EmptyTopology(num_qubits));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &(i, j) in topology {
        if i >= num_qubits || j >= num_qubits || i == j {
            return Err(NoiseError::BadEdge(i, j, num_qubits));
        }
        let key = (i.min(j), i.max(j));
        if !edges.contains(&key) {
            edges.push(key);
        }
    }

    let mut rng = rng_from_seed(seed);
    let mut draw = || {
        if hi > lo {
            rng.random_range(lo..=hi)
        } else {
            lo
        }
    };
    let qubit_p: Vec<f64> = (0..num_qubits).map(|_| draw()).collect();
    let edge_p: Vec<f64> = edges.iter().map(|_| draw()).collect();

    let mut model = NoiseModel::perfect(num_qubits);
    model.two_qubit.clear();
    let prep_base = family.prep_base();
    let prep_perfect = diag_state(1.0, 0.0);
    for (q, &p) in qubit_p.iter().enumerate() {
        for g in NoisyGate::ALL {
            let base = family.one_qubit_base(g);
            let perfect = ProcessMatrix::perfect(&g.gate(0));
            model
                .one_qubit
                .insert((g, q), mix_channel(&base, &perfect, p)?);
        }
        model.initial_state[q] =
            prep_base * Complex64::new(p, 0.0) + prep_perfect * Complex64::new(1.0 - p, 0.0);
    }
    let cnot_base = family.cnot_base();
    let cnot_perfect = ProcessMatrix::perfect(&Gate::CNOT {
        control: 0,
        target: 1,
    });
    for (&(i, j), &p) in edges.iter().zip(&edge_p) {
        let ch = mix_channel(&cnot_base, &cnot_perfect, p)?;
        model.two_qubit.insert((i, j), ch.clone());
        model.two_qubit.insert((j, i), ch);
        model.mixing.edges.insert((i, j), p);
    }
    model.mixing.qubits = qubit_p;

    for (what, diag) in model.diagnostics(CPTP_TOLERANCE) {
        if !diag.passed {
            return Err(NoiseError::NotCptp {
                what,
                diagnostics: diag,
            });
        }
    }
    Ok(model)
}

/// Nearest-neighbour ring `(i, i+1 mod Q)`.
pub fn ring_topology(num_qubits: usize) -> Vec<(usize, usize)> {
    match num_qubits {
        0 | 1 => Vec::new(),
        2 => vec![(0, 1)],
        n => (0..n).map(|i| (i, (i + 1) % n)).collect(),
    }
}

/// JSON channel file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub qubits: usize,
    #[serde(default)]
    pub one_qubit: Vec<OneQubitEntry>,
    #[serde(default)]
    pub two_qubit: Vec<TwoQubitEntry>,
    #[serde(default)]
    pub initial_state: Vec<InitialStateEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixing: Option<MixingEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneQubitEntry {
    pub gate: String,
    pub qubit: usize,
    pub ptm: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitEntry {
    pub edge: [usize; 2],
    pub ptm: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialStateEntry {
    pub qubit: usize,
    /// Row-major 2×2 entries as `[re, im]` pairs.
    pub rho: [[f64; 2]; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingEntry {
    pub qubits: Vec<f64>,
    pub edges: Vec<EdgeWeight>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeWeight {
    pub edge: [usize; 2],
    pub p: f64,
}
