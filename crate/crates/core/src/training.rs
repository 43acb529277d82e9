//! Near-Clifford training circuits: sequential random substitution and a
//! Metropolis chain that steers the exact expectation value to a target.

use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{clifford_angle, rz_distance, Circuit, Gate, PauliObservable};
use crate::rng::{derive_seed, rng_from_seed, SeededRng};
use crate::sim::{expectation_exact, run_exact, SimError};

#[derive(Debug, Error)]
pub enum TrainingError {
    #[error("sigma must be positive and finite, got {0}")]
    BadSigma(f64),
    #[error("requested {requested} non-Clifford gates but the circuit has {available}")]
    TooManyNonClifford { requested: usize, available: usize },
    #[error("swap size {n_swap} needs {n_swap} kept and replaced gates; have {kept} kept, {replaced} replaced")]
    InsufficientPositions {
        n_swap: usize,
        kept: usize,
        replaced: usize,
    },
    #[error("target grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),
    #[error("invalid MCMC configuration: {0}")]
    BadConfig(String),
    #[error("target {target} not reached after {steps} steps; best distance {best_distance}")]
    TargetNotReached {
        target: f64,
        steps: usize,
        best_distance: f64,
    },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Unnormalized weights `w_k = exp(−d(θ, k)² / σ²)` for `k = 0..3`.
pub fn substitution_weights(theta: f64, sigma: f64) -> Result<[f64; 4], TrainingError> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(TrainingError::BadSigma(sigma));
    }
    Ok([0u8, 1, 2, 3].map(|k| {
        let d = rz_distance(theta, k);
        (-d * d / (sigma * sigma)).exp()
    }))
}

/// Per-gate probabilities `w_k / Σ w`.
pub fn substitution_probabilities(theta: f64, sigma: f64) -> Result<[f64; 4], TrainingError> {
    let w = substitution_weights(theta, sigma)?;
    let total: f64 = w.iter().sum();
    Ok(w.map(|x| x / total))
}

/// Replace `Ñ − N` non-Clifford gates one round at a time, each round
/// drawing `(gate, k)` jointly over the gates still non-Clifford.
pub fn generate_standard(
    coi: &Circuit,
    non_clifford: usize,
    sigma: f64,
    seed: u64,
) -> Result<Circuit, TrainingError> {
    let mut state = SubstitutionState::new(Arc::new(coi.clone()));
    let mut rng = rng_from_seed(seed);
    state.fill_standard(non_clifford, sigma, &mut rng)?;
    Ok(state.to_circuit())
}

/// A training circuit described relative to the circuit of interest.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionState {
    base: Arc<Circuit>,
    /// Gate indices of the non-Clifford `RZ`s of `base`.
    positions: Vec<usize>,
    /// `None` keeps the original angle; `Some(k)` substitutes `kπ/2`.
    replaced: Vec<Option<u8>>,
}

impl SubstitutionState {
    /// All non-Clifford gates kept.
    pub fn new(base: Arc<Circuit>) -> Self {
        let positions = base.non_clifford_positions();
        let replaced = vec![None; positions.len()];
        Self {
            base,
            positions,
            replaced,
        }
    }

    pub fn from_map(base: Arc<Circuit>, replaced: Vec<Option<u8>>) -> Result<Self, TrainingError> {
        let positions = base.non_clifford_positions();
        if replaced.len() != positions.len() || replaced.iter().flatten().any(|&k| k > 3) {
            return Err(TrainingError::BadConfig(
                "substitution map does not match the circuit".into(),
            ));
        }
        Ok(Self {
            base,
            positions,
            replaced,
        })
    }

    pub fn base(&self) -> &Circuit {
        &self.base
    }

    pub fn map(&self) -> &[Option<u8>] {
        &self.replaced
    }

    pub fn kept_count(&self) -> usize {
        self.replaced.iter().filter(|r| r.is_none()).count()
    }

    /// Slots (indices into the non-Clifford list) still at their original angle.
    pub fn kept_slots(&self) -> Vec<usize> {
        (0..self.replaced.len())
            .filter(|&i| self.replaced[i].is_none())
            .collect()
    }

    pub fn replaced_slots(&self) -> Vec<usize> {
        (0..self.replaced.len())
            .filter(|&i| self.replaced[i].is_some())
            .collect()
    }

    fn original_angle(&self, slot: usize) -> f64 {
        self.base.gates()[self.positions[slot]]
            .angle()
            .expect("non-Clifford gates are RZ")
    }

    pub fn to_circuit(&self) -> Circuit {
        let mut c = (*self.base).clone();
        for (slot, r) in self.replaced.iter().enumerate() {
            if let Some(k) = r {
                c.set_rz_angle(self.positions[slot], clifford_angle(*k));
            }
        }
        c
    }

    fn fill_standard(
        &mut self,
        target: usize,
        sigma: f64,
        rng: &mut SeededRng,
    ) -> Result<(), TrainingError> {
        let available = self.kept_count();
        if target > available {
            return Err(TrainingError::TooManyNonClifford {
                requested: target,
                available,
            });
        }
        for _ in 0..available - target {
            let kept = self.kept_slots();
            let mut weights = Vec::with_capacity(4 * kept.len());
            for &slot in &kept {
                weights.extend(substitution_weights(self.original_angle(slot), sigma)?);
            }
            let dist = WeightedIndex::new(&weights)
                .map_err(|e| TrainingError::BadConfig(format!("substitution weights: {e}")))?;
            let pick = dist.sample(rng);
            self.replaced[kept[pick / 4]] = Some((pick % 4) as u8);
        }
        Ok(())
    }
}

/// Swap `n_swap` kept gates for Clifford substitutes (drawn from the per-gate
/// law) and restore `n_swap` previously replaced gates.
pub fn mcmc_propose(
    state: &SubstitutionState,
    n_swap: usize,
    sigma: f64,
    seed: u64,
) -> Result<SubstitutionState, TrainingError> {
    propose_with(state, n_swap, sigma, &mut rng_from_seed(seed))
}

pub fn propose_with(
    state: &SubstitutionState,
    n_swap: usize,
    sigma: f64,
    rng: &mut SeededRng,
) -> Result<SubstitutionState, TrainingError> {
    let kept = state.kept_slots();
    let replaced = state.replaced_slots();
    if n_swap > kept.len() || n_swap > replaced.len() {
        return Err(TrainingError::InsufficientPositions {
            n_swap,
            kept: kept.len(),
            replaced: replaced.len(),
        });
    }
    let mut next = state.clone();
    for i in sample(rng, kept.len(), n_swap) {
        let slot = kept[i];
        let p = substitution_weights(state.original_angle(slot), sigma)?;
        let dist = WeightedIndex::new(p)
            .map_err(|e| TrainingError::BadConfig(format!("substitution weights: {e}")))?;
        next.replaced[slot] = Some(dist.sample(rng) as u8);
    }
    for i in sample(rng, replaced.len(), n_swap) {
        next.replaced[replaced[i]] = None;
    }
    Ok(next)
}

/// Evenly spaced targets from −0.5 to 0.5.
pub fn target_grid(n: usize) -> Result<Vec<f64>, TrainingError> {
    if n < 2 {
        return Err(TrainingError::GridTooSmall(n));
    }
    Ok((0..n).map(|i| -0.5 + i as f64 / (n - 1) as f64).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcConfig {
    pub sigma_mcmc: f64,
    pub n_swap: usize,
    pub sigma_sub: f64,
    /// Non-Clifford gates kept in each training circuit.
    pub non_clifford: usize,
    pub targets: Vec<f64>,
    pub max_steps: usize,
    pub epsilon_target: f64,
    /// Fresh chains tried after the first one runs out of steps.
    pub restarts: usize,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            sigma_mcmc: 0.01,
            n_swap: 5,
            sigma_sub: 0.5,
            non_clifford: 30,
            targets: vec![-0.5, 0.5],
            max_steps: 20_000,
            epsilon_target: 0.03,
            restarts: 3,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<(), TrainingError> {
        let bad = |m: &str| Err(TrainingError::BadConfig(m.into()));
        if !(self.sigma_mcmc > 0.0) {
            return bad("sigma_mcmc must be positive");
        }
        if !(self.sigma_sub > 0.0) {
            return bad("sigma_sub must be positive");
        }
        if !(self.epsilon_target > 0.0) {
            return bad("epsilon_target must be positive");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive");
        }
        if self.targets.iter().any(|y| !(-1.0..=1.0).contains(y)) {
            return bad("targets must lie in [-1, 1]");
        }
        Ok(())
    }
}

/// Metropolis chain over substitution states targeting
/// `p ∝ exp(−(O − y)² / σ²)`.
pub struct McmcChain<'a> {
    observable: &'a PauliObservable,
    target: f64,
    sigma_mcmc: f64,
    sigma_sub: f64,
    n_swap: usize,
    state: SubstitutionState,
    value: f64,
    rng: SeededRng,
}

fn exact_value(state: &SubstitutionState, obs: &PauliObservable) -> Result<f64, TrainingError> {
    Ok(expectation_exact(&run_exact(&state.to_circuit())?, obs)?)
}

impl<'a> McmcChain<'a> {
    pub fn new(
        state: SubstitutionState,
        observable: &'a PauliObservable,
        target: f64,
        config: &McmcConfig,
        rng: SeededRng,
    ) -> Result<Self, TrainingError> {
        let value = exact_value(&state, observable)?;
        Ok(Self {
            observable,
            target,
            sigma_mcmc: config.sigma_mcmc,
            sigma_sub: config.sigma_sub,
            n_swap: config.n_swap,
            state,
            value,
            rng,
        })
    }

    pub fn state(&self) -> &SubstitutionState {
        &self.state
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// One propose/accept step; returns whether the candidate was accepted.
    pub fn step(&mut self) -> Result<bool, TrainingError> {
        let cand = propose_with(&self.state, self.n_swap, self.sigma_sub, &mut self.rng)?;
        let value = exact_value(&cand, self.observable)?;
        let s2 = self.sigma_mcmc * self.sigma_mcmc;
        let log_ratio = -((value - self.target).powi(2) - (self.value - self.target).powi(2)) / s2;
        let u: f64 = self.rng.random();
        if u.ln() < log_ratio {
            self.state = cand;
            self.value = value;
            Ok(true)
        } else {
            Ok(false)
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChainOutcome {
    pub circuit: Circuit,
    pub achieved: f64,
    /// Steps taken in the successful chain.
    pub steps: usize,
    /// Steps over all attempts.
    pub total_steps: usize,
    pub attempts: usize,
    pub seed: u64,
}

/// Run chains until one reaches `|O − y| ≤ ε`, trying up to
/// `1 + restarts` fresh starts.
pub fn mcmc_chain(
    coi: &Circuit,
    observable: &PauliObservable,
    target: f64,
    config: &McmcConfig,
    seed: u64,
) -> Result<ChainOutcome, TrainingError> {
    config.validate()?;
    let base = Arc::new(coi.clone());
    let mut best_distance = f64::INFINITY;
    let mut total_steps = 0;
    for attempt in 0..=config.restarts {
        let chain_seed = derive_seed(seed, &[attempt as u64]);
        let mut rng = rng_from_seed(chain_seed);
        let mut init = SubstitutionState::new(base.clone());
        init.fill_standard(config.non_clifford, config.sigma_sub, &mut rng)?;
        let mut chain = McmcChain::new(init, observable, target, config, rng)?;
        let mut step = 0;
        loop {
            let distance = (chain.value() - target).abs();
            best_distance = best_distance.min(distance);
            if distance <= config.epsilon_target {
                return Ok(ChainOutcome {
                    circuit: chain.state().to_circuit(),
                    achieved: chain.value(),
                    steps: step,
                    total_steps: total_steps + step,
                    attempts: attempt + 1,
                    seed: chain_seed,
                });
            }
            if step == config.max_steps {
                break;
            }
            chain.step()?;
            step += 1;
        }
        total_steps += step;
        log::debug!(
            "chain for target {target} exhausted (attempt {attempt}, best {best_distance:.4})"
        );
    }
    Err(TrainingError::TargetNotReached {
        target,
        steps: total_steps,
        best_distance,
    })
}

/// Whether `training` is `coi` with some non-Clifford `RZ`s moved to
/// Clifford angles, leaving exactly `non_clifford` of them untouched.
pub fn is_training_circuit(coi: &Circuit, training: &Circuit, non_clifford: usize) -> bool {
    let tol = crate::circuit::CLIFFORD_TOLERANCE;
    coi.num_qubits() == training.num_qubits()
        && coi.len() == training.len()
        && training.non_clifford_count() == non_clifford
        && coi.gates().iter().zip(training.gates()).all(|(a, b)| {
            a == b
                || matches!((a, b), (Gate::RZ { qubit: qa, .. }, Gate::RZ { qubit: qb, .. })
                    if qa == qb && !a.is_clifford(tol) && b.is_clifford(tol))
        })
}
