//! XY-model benchmark target: Hamiltonian, exact ground state, a
//! translation-symmetric ansatz, VQE, and the half-chain correlators.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{wrap_angle, Circuit, CircuitError, Gate, Pauli, PauliObservable};
use crate::rng::{derive_seed, rng_from_seed};
use crate::sim::{SimError, StateVector, MAX_STATEVECTOR_QUBITS};

pub const MAX_EXACT_QUBITS: usize = 12;

#[derive(Debug, Error)]
pub enum TargetError {
    #[error("XY model needs an even qubit count, got {0}")]
    OddQubits(usize),
    #[error("XY model needs at least 4 qubits, got {0}")]
    TooFewQubits(usize),
    #[error("{requested} qubits exceeds the cap of {cap}")]
    QubitCap { requested: usize, cap: usize },
    #[error("ansatz needs at least one layer")]
    NoLayers,
    #[error("expected {expected} parameters, got {found}")]
    ParameterCount { expected: usize, found: usize },
    #[error("ground-state residual {0:e} too large")]
    Residual(f64),
    #[error("energy target {target:e} not met up to {layers} layers; best gap {best_gap:e}")]
    TargetNotMet {
        target: f64,
        layers: usize,
        best_gap: f64,
    },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Periodic XY chain `H = Σᵢ XᵢXᵢ₊₁ + YᵢYᵢ₊₁` with unit coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct XYModel {
    num_qubits: usize,
}

impl XYModel {
    pub fn new(num_qubits: usize) -> Result<Self, TargetError> {
        if !num_qubits.is_multiple_of(2) {
            return Err(TargetError::OddQubits(num_qubits));
        }
        if num_qubits < 4 {
            return Err(TargetError::TooFewQubits(num_qubits));
        }
        if num_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(TargetError::QubitCap {
                requested: num_qubits,
                cap: MAX_STATEVECTOR_QUBITS,
            });
        }
        Ok(Self { num_qubits })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn bonds(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_qubits).map(move |i| (i, (i + 1) % self.num_qubits))
    }

    /// `H|ψ⟩`. Each bond hops `|01⟩ ↔ |10⟩` with amplitude 2.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (i, j) in self.bonds() {
            let mask = (1usize << i) | (1usize << j);
            for (b, &a) in amps.iter().enumerate() {
                if (b >> i) & 1 != (b >> j) & 1 {
                    out[b ^ mask] += 2.0 * a;
                }
            }
        }
        out
    }

    pub fn energy(&self, state: &StateVector) -> f64 {
        let h = self.apply(state.amplitudes());
        state
            .amplitudes()
            .iter()
            .zip(&h)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
    /// Hamming weight of the sector holding the ground state.
    pub weight: usize,
}

/// Lowest eigenpair, found by diagonalizing each Hamming-weight block.
pub fn exact_ground(model: &XYModel) -> Result<GroundState, TargetError> {
    let q = model.num_qubits;
    if q > MAX_EXACT_QUBITS {
        return Err(TargetError::QubitCap {
            requested: q,
            cap: MAX_EXACT_QUBITS,
        });
    }
    let dim = 1usize << q;
    let mut best: Option<(f64, usize, Vec<usize>, DVector<f64>)> = None;
    for w in 0..=q {
        let basis: Vec<usize> = (0..dim).filter(|b| b.count_ones() as usize == w).collect();
        let mut index = vec![usize::MAX; dim];
        for (k, &b) in basis.iter().enumerate() {
            index[b] = k;
        }
        let n = basis.len();
        let mut h = DMatrix::<f64>::zeros(n, n);
        for (k, &b) in basis.iter().enumerate() {
            for (i, j) in model.bonds() {
                if (b >> i) & 1 != (b >> j) & 1 {
                    let other = b ^ ((1 << i) | (1 << j));
                    h[(index[other], k)] += 2.0;
                }
            }
        }
        let eig = h.symmetric_eigen();
        let (m, &e) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty sector");
        if best.as_ref().is_none_or(|(be, ..)| e < be - 1e-12) {
            best = Some((e, w, basis, eig.eigenvectors.column(m).into_owned()));
        }
    }
    let (energy, weight, basis, v) = best.expect("at least one sector");
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (k, &b) in basis.iter().enumerate() {
        amps[b] = Complex64::new(v[k], 0.0);
    }
    let state = StateVector::from_amplitudes(amps)?;
    let hv = model.apply(state.amplitudes());
    let residual = hv
        .iter()
        .zip(state.amplitudes())
        .map(|(h, a)| (h - a * energy).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > 1e-9 {
        return Err(TargetError::Residual(residual));
    }
    Ok(GroundState {
        energy,
        state,
        weight,
    })
}

/// `X_j X_{j+Q/2}` for `j < Q/2`, then `Y_j Y_{j+Q/2}` (0-indexed).
pub fn half_chain_correlators(num_qubits: usize) -> Result<Vec<PauliObservable>, TargetError> {
    if !num_qubits.is_multiple_of(2) || num_qubits == 0 {
        return Err(TargetError::OddQubits(num_qubits));
    }
    let h = num_qubits / 2;
    let mut out = Vec::with_capacity(num_qubits);
    for p in [Pauli::X, Pauli::Y] {
        for j in 0..h {
            out.push(PauliObservable::from_sparse(
                num_qubits,
                &[(j, p), (j + h, p)],
            )?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    /// Shared Euler triple on every qubit, then a sequential CNOT ring.
    /// Three parameters per layer.
    EulerCnotRing,
    /// Shared Euler triple, then `exp(−iφₓ/2 ΣXX)` and `exp(−iφᵧ/2 ΣYY)`
    /// over the ring bonds. Five parameters per layer.
    XyExchange,
}

impl AnsatzKind {
    pub fn params_per_layer(self) -> usize {
        match self {
            AnsatzKind::EulerCnotRing => 3,
            AnsatzKind::XyExchange => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub layers: usize,
    pub kind: AnsatzKind,
    /// Append `Z` on every odd qubit. This maps `H` to `−H`, whose ground
    /// state has zero momentum when `Q/2` is odd.
    pub staggered_frame: bool,
}

impl AnsatzSpec {
    /// Default ansatz for an XY ring of `num_qubits` sites.
    pub fn for_xy(num_qubits: usize, layers: usize) -> Self {
        Self {
            layers,
            kind: AnsatzKind::XyExchange,
            staggered_frame: (num_qubits / 2) % 2 == 1,
        }
    }

    pub fn num_params(&self) -> usize {
        self.layers * self.kind.params_per_layer()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    Fixed(Gate),
    Param {
        qubit: usize,
        index: usize,
        offset: f64,
    },
}

/// Parameterized circuit: every `RZ` slot is either fixed or
/// `RZ(θ[index] + offset)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzTemplate {
    num_qubits: usize,
    num_params: usize,
    slots: Vec<Slot>,
}

struct TemplateBuilder {
    num_qubits: usize,
    slots: Vec<Slot>,
    last: Vec<Option<usize>>,
}

impl TemplateBuilder {
    fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            slots: Vec::new(),
            last: vec![None; num_qubits],
        }
    }

    fn push(&mut self, slot: Slot) {
        let rz_qubit = match slot {
            Slot::Fixed(Gate::RZ { qubit, .. }) | Slot::Param { qubit, .. } => Some(qubit),
            _ => None,
        };
        if let Some(q) = rz_qubit {
            if let Some(prev) = self.last[q] {
                if let Some(merged) = merge_rz(self.slots[prev], slot) {
                    self.slots[prev] = merged;
                    return;
                }
            }
            self.last[q] = Some(self.slots.len());
        } else if let Slot::Fixed(g) = slot {
            self.last[g.target()] = Some(self.slots.len());
            if let Some(c) = g.control() {
                self.last[c] = Some(self.slots.len());
            }
        }
        self.slots.push(slot);
    }

    fn fixed(&mut self, g: Gate) {
        self.push(Slot::Fixed(g));
    }

    fn rz(&mut self, qubit: usize, angle: f64) {
        self.fixed(Gate::RZ { qubit, angle });
    }

    fn param(&mut self, qubit: usize, index: usize) {
        self.push(Slot::Param {
            qubit,
            index,
            offset: 0.0,
        });
    }

    fn hadamard_all(&mut self) {
        for q in 0..self.num_qubits {
            self.rz(q, FRAC_PI_2);
            self.fixed(Gate::SX(q));
            self.rz(q, FRAC_PI_2);
        }
    }

    /// `exp(−iθ/2 Σ ZᵢZᵢ₊₁)` over the ring, `θ = params[index]`.
    fn zz_ring(&mut self, index: usize) {
        let n = self.num_qubits;
        for i in 0..n {
            let j = (i + 1) % n;
            self.fixed(Gate::CNOT {
                control: i,
                target: j,
            });
            self.param(j, index);
            self.fixed(Gate::CNOT {
                control: i,
                target: j,
            });
        }
    }

    fn finish(self, num_params: usize) -> AnsatzTemplate {
        let slots = self
            .slots
            .into_iter()
            .filter(|s| !matches!(s, Slot::Fixed(Gate::RZ { angle, .. }) if wrap_angle(*angle).abs() < 1e-12))
            .map(|s| match s {
                Slot::Fixed(Gate::RZ { qubit, angle }) => Slot::Fixed(Gate::RZ {
                    qubit,
                    angle: wrap_angle(angle),
                }),
                other => other,
            })
            .collect();
        AnsatzTemplate {
            num_qubits: self.num_qubits,
            num_params,
            slots,
        }
    }
}

fn merge_rz(a: Slot, b: Slot) -> Option<Slot> {
    match (a, b) {
        (Slot::Fixed(Gate::RZ { qubit, angle: x }), Slot::Fixed(Gate::RZ { angle: y, .. })) => {
            Some(Slot::Fixed(Gate::RZ {
                qubit,
                angle: x + y,
            }))
        }
        (
            Slot::Fixed(Gate::RZ { angle, .. }),
            Slot::Param {
                qubit,
                index,
                offset,
            },
        )
        | (
            Slot::Param {
                qubit,
                index,
                offset,
            },
            Slot::Fixed(Gate::RZ { angle, .. }),
        ) => Some(Slot::Param {
            qubit,
            index,
            offset: offset + angle,
        }),
        _ => None,
    }
}

/// Build the parameterized circuit. Parameters are shared across qubits,
/// so relabelling `q → q+1 mod Q` maps each layer onto itself.
pub fn build_ansatz(spec: &AnsatzSpec, num_qubits: usize) -> Result<AnsatzTemplate, TargetError> {
    if spec.layers == 0 {
        return Err(TargetError::NoLayers);
    }
    if num_qubits < 2 {
        return Err(TargetError::TooFewQubits(num_qubits));
    }
    let per = spec.kind.params_per_layer();
    let mut b = TemplateBuilder::new(num_qubits);
    for l in 0..spec.layers {
        let p = l * per;
        for q in 0..num_qubits {
            b.param(q, p);
            b.fixed(Gate::SX(q));
            b.param(q, p + 1);
            b.fixed(Gate::SX(q));
            b.param(q, p + 2);
        }
        match spec.kind {
            AnsatzKind::EulerCnotRing => {
                for i in 0..num_qubits {
                    b.fixed(Gate::CNOT {
                        control: i,
                        target: (i + 1) % num_qubits,
                    });
                }
            }
            AnsatzKind::XyExchange => {
                b.hadamard_all();
                b.zz_ring(p + 3);
                b.hadamard_all();
                // (S·H)† = H·S† rotates Y onto Z
                for q in 0..num_qubits {
                    b.fixed(Gate::SX(q));
                    b.rz(q, FRAC_PI_2);
                }
                b.zz_ring(p + 4);
                for q in 0..num_qubits {
                    b.rz(q, FRAC_PI_2);
                    b.fixed(Gate::SX(q));
                    b.rz(q, PI);
                }
            }
        }
    }
    if spec.staggered_frame {
        for q in (1..num_qubits).step_by(2) {
            b.rz(q, PI);
        }
    }
    Ok(b.finish(spec.num_params()))
}

impl AnsatzTemplate {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    /// Number of parameterized `RZ` slots.
    pub fn param_slot_count(&self) -> usize {
        self.slots
            .iter()
            .filter(|s| matches!(s, Slot::Param { .. }))
            .count()
    }

    fn gates_with_params(&self, params: &[f64]) -> (Vec<Gate>, Vec<Option<usize>>) {
        self.slots
            .iter()
            .map(|s| match *s {
                Slot::Fixed(g) => (g, None),
                Slot::Param {
                    qubit,
                    index,
                    offset,
                } => (
                    Gate::RZ {
                        qubit,
                        angle: wrap_angle(params[index] + offset),
                    },
                    Some(index),
                ),
            })
            .unzip()
    }

    pub fn bind(&self, params: &[f64]) -> Result<Circuit, TargetError> {
        if params.len() != self.num_params {
            return Err(TargetError::ParameterCount {
                expected: self.num_params,
                found: params.len(),
            });
        }
        Ok(Circuit::new(
            self.num_qubits,
            self.gates_with_params(params).0,
        )?)
    }

    /// Energy and exact gradient by a reverse (adjoint) sweep.
    pub fn energy_and_gradient(&self, model: &XYModel, params: &[f64]) -> (f64, Vec<f64>) {
        let (gates, owners) = self.gates_with_params(params);
        let mut psi = StateVector::zero(self.num_qubits);
        for g in &gates {
            psi.apply(g);
        }
        let h = model.apply(psi.amplitudes());
        let energy: f64 = psi
            .amplitudes()
            .iter()
            .zip(&h)
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        let mut lambda = StateVector::from_amplitudes(h).expect("power-of-two dimension");
        let mut grad = vec![0.0; self.num_params];
        for (g, owner) in gates.iter().zip(&owners).rev() {
            if let (Some(p), Gate::RZ { qubit, .. }) = (owner, g) {
                let m = 1usize << qubit;
                let z: Complex64 = lambda
                    .amplitudes()
                    .iter()
                    .zip(psi.amplitudes())
                    .enumerate()
                    .map(|(b, (l, a))| {
                        let v = l.conj() * a;
                        if b & m == 0 {
                            v
                        } else {
                            -v
                        }
                    })
                    .sum();
                // d/dθ of RZ(θ) = −(i/2) Z · RZ(θ)
                grad[*p] += z.im;
            }
            psi.apply_inverse(g);
            lambda.apply_inverse(g);
        }
        (energy, grad)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VqeConfig {
    pub energy_target: f64,
    pub gradient_tolerance: f64,
    /// A restart only counts as converged below this gradient norm.
    pub accept_gradient: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    /// First layer count tried; `None` picks the count closest to
    /// `non_clifford_hint` parameterized gates.
    pub start_layers: Option<usize>,
    pub max_layers: usize,
    pub non_clifford_hint: usize,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self {
            energy_target: 1e-6,
            gradient_tolerance: 1e-11,
            accept_gradient: 1e-8,
            max_iterations: 4000,
            restarts: 5,
            start_layers: None,
            max_layers: 10,
            non_clifford_hint: 150,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VqeResult {
    pub circuit: Circuit,
    pub params: Vec<f64>,
    pub energy: f64,
    pub exact_energy: f64,
    pub layers: usize,
    pub seed: u64,
    pub gradient_norm: f64,
    /// Energy after every accepted optimizer step.
    pub history: Vec<f64>,
}

impl VqeResult {
    pub fn gap(&self) -> f64 {
        self.energy - self.exact_energy
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub history: Vec<f64>,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Gradient norm below which BFGS hands over to Newton refinement.
const NEWTON_SWITCH: f64 = 1e-6;

/// BFGS with Armijo backtracking, then Newton refinement with a
/// finite-difference Hessian of the exact gradient.
pub fn minimize<F>(f: F, x0: Vec<f64>, gtol: f64, max_iter: usize) -> Minimum
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = x0;
    let (mut fx, mut g) = f(&x);
    let mut history = vec![fx];
    let mut hinv = DMatrix::<f64>::identity(n, n);
    let mut fresh = true;
    for _ in 0..max_iter {
        if inf_norm(&g) < gtol.max(NEWTON_SWITCH) {
            break;
        }
        let gv = DVector::from_column_slice(&g);
        let mut d = -(&hinv * &gv);
        let mut slope = d.dot(&gv);
        if slope >= 0.0 {
            hinv = DMatrix::identity(n, n);
            fresh = true;
            d = -gv.clone();
            slope = d.dot(&gv);
        }
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-12 {
            let xn: Vec<f64> = x.iter().zip(d.iter()).map(|(a, b)| a + t * b).collect();
            let (fnew, gnew) = f(&xn);
            if fnew <= fx + 1e-4 * t * slope {
                accepted = Some((xn, fnew, gnew));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, fnew, gnew)) = accepted else {
            if fresh {
                break;
            }
            hinv = DMatrix::identity(n, n);
            fresh = true;
            continue;
        };
        let s = DVector::from_iterator(n, xn.iter().zip(&x).map(|(a, b)| a - b));
        let y = DVector::from_iterator(n, gnew.iter().zip(&g).map(|(a, b)| a - b));
        let sy = s.dot(&y);
        if sy > 1e-300 {
            if fresh {
                hinv *= sy / y.dot(&y);
            }
            let rho = 1.0 / sy;
            let eye = DMatrix::<f64>::identity(n, n);
            let left = &eye - rho * &s * y.transpose();
            let right = &eye - rho * &y * s.transpose();
            hinv = left * &hinv * right + rho * &s * s.transpose();
            fresh = false;
        }
        x = xn;
        fx = fnew;
        g = gnew;
        history.push(fx);
    }

    // Damped Newton refinement: BFGS stalls once energy changes drop below
    // rounding, while the exact gradient still carries information.
    let h = 1e-5;
    let mut mu = 1e-10;
    let mut hessian_at_x = None;
    for _ in 0..200 {
        let gn = inf_norm(&g);
        if gn < gtol {
            break;
        }
        let eig = hessian_at_x.get_or_insert_with(|| {
            let mut hess = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let gp = f(&xp).1;
                let gm = f(&xm).1;
                for j in 0..n {
                    hess[(j, i)] = (gp[j] - gm[j]) / (2.0 * h);
                }
            }
            ((&hess + hess.transpose()) * 0.5).symmetric_eigen()
        });
        let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let gv = DVector::from_column_slice(&g);
        let mut step = DVector::<f64>::zeros(n);
        for (k, &lam) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            step -= v * (v.dot(&gv) / (lam.abs() + mu * scale));
        }
        let xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        let (fnew, gnew) = f(&xn);
        let tol = 1e-13 * fx.abs().max(1.0);
        if inf_norm(&gnew) < gn && fnew <= fx + tol {
            x = xn;
            fx = fnew;
            g = gnew;
            history.push(fx);
            hessian_at_x = None;
            mu = (mu * 0.1).max(1e-12);
        } else if mu < 1.0 {
            mu *= 10.0;
        } else {
            break;
        }
    }
    Minimum {
        gradient_norm: inf_norm(&g),
        x,
        value: fx,
        history,
    }
}

/// Optimize a fixed-depth ansatz from `restarts` seeded random starts and
/// return the best.
pub fn vqe_optimize(
    model: &XYModel,
    spec: &AnsatzSpec,
    config: &VqeConfig,
    seed: u64,
) -> Result<VqeResult, TargetError> {
    let exact = exact_ground(model)?;
    let template = build_ansatz(spec, model.num_qubits())?;
    let mut best: Option<(Minimum, u64)> = None;
    for r in 0..config.restarts.max(1) {
        let run_seed = derive_seed(seed, &[spec.layers as u64, r as u64]);
        let mut rng = rng_from_seed(run_seed);
        let x0: Vec<f64> = (0..template.num_params())
            .map(|_| rng.random_range(-PI..PI))
            .collect();
        let m = minimize(
            |x| template.energy_and_gradient(model, x),
            x0,
            config.gradient_tolerance,
            config.max_iterations,
        );
        log::debug!(
            "vqe L={} restart {r}: gap {:.3e}, |g| {:.1e}",
            spec.layers,
            m.value - exact.energy,
            m.gradient_norm
        );
        let better = best.as_ref().is_none_or(|(b, _)| m.value < b.value);
        let done = m.value - exact.energy <= config.energy_target
            && m.gradient_norm <= config.accept_gradient;
        if better {
            best = Some((m, run_seed));
        }
        if done {
            break;
        }
    }
    let (m, run_seed) = best.expect("at least one restart");
    Ok(VqeResult {
        circuit: template.bind(&m.x)?,
        params: m.x,
        energy: m.value,
        exact_energy: exact.energy,
        layers: spec.layers,
        seed: run_seed,
        gradient_norm: m.gradient_norm,
        history: m.history,
    })
}

/// Layer count whose parameterized-gate total is closest to `hint`.
pub fn layers_for_hint(kind: AnsatzKind, num_qubits: usize, hint: usize) -> usize {
    let per_layer = match kind {
        AnsatzKind::EulerCnotRing => 3 * num_qubits,
        AnsatzKind::XyExchange => 5 * num_qubits,
    };
    ((hint as f64 / per_layer as f64).round() as usize).max(1)
}

/// Prepare the circuit of interest, deepening the ansatz until the energy
/// target is met or `max_layers` is reached.
pub fn prepare_ground_circuit(
    model: &XYModel,
    config: &VqeConfig,
    seed: u64,
) -> Result<VqeResult, TargetError> {
    let q = model.num_qubits();
    let start = config
        .start_layers
        .unwrap_or_else(|| layers_for_hint(AnsatzKind::XyExchange, q, config.non_clifford_hint));
    let mut best: Option<VqeResult> = None;
    for layers in start..=config.max_layers.max(start) {
        let res = vqe_optimize(model, &AnsatzSpec::for_xy(q, layers), config, seed)?;
        let met = res.gap() <= config.energy_target;
        if best.as_ref().is_none_or(|b| res.gap() < b.gap()) {
            best = Some(res);
        }
        if met {
            return Ok(best.expect("just set"));
        }
    }
    let best = best.expect("at least one depth tried");
    Err(TargetError::TargetNotMet {
        target: config.energy_target,
        layers: config.max_layers.max(start),
        best_gap: best.gap(),
    })
}
