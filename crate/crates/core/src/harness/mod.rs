//! End-to-end experiments: build the target and noise model, generate
//! training sets for each arm, simulate shots, fit and score.

mod config;
mod layout;
mod output;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{ExperimentConfig, MethodChoice, NoiseConfig, TargetConfig};
pub use layout::{layout_efficient, layout_standard, EfficientLayout, StandardLayout};
pub use output::{emit_outputs, summarize, CellSummary, ErrorStats, Summary};

use crate::circuit::{Circuit, CircuitError, PauliObservable};
use crate::fit::{
    absolute_error, fit_plain_all, fit_symmetric, FitError, FitMethod, Sample, TrainingSet,
};
use crate::noise::{build_random_model, ring_topology, ChannelFile, NoiseError, NoiseModel};
use crate::rng::derive_seed;
use crate::sim::{
    expectation_exact, run_exact, run_noisy_compiled, sample_pauli_group, Basis, CompiledNoise,
    DensityMatrix, SimError,
};
use crate::target::{half_chain_correlators, prepare_ground_circuit, TargetError, XYModel};
use crate::training::{generate_standard, mcmc_chain, McmcConfig, TrainingError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Training(#[from] TrainingError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

impl HarnessError {
    /// Process exit code: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 3,
        }
    }
}

/// Mitigation arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Standard,
    Efficient,
}

impl Arm {
    pub fn name(self) -> &'static str {
        match self {
            Arm::Standard => "standard",
            Arm::Efficient => "efficient",
        }
    }

    fn tag(self) -> u64 {
        self as u64
    }
}

/// Where the circuit of interest came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetInfo {
    pub qubits: usize,
    pub non_clifford: usize,
    pub energy: Option<f64>,
    pub exact_energy: Option<f64>,
    pub layers: Option<usize>,
}

/// Everything shared by all instances of an experiment.
pub struct Context {
    pub coi: Arc<Circuit>,
    pub observables: Vec<PauliObservable>,
    pub bases: Vec<Basis>,
    /// Exact coi expectation of each observable.
    pub exact: Vec<f64>,
    pub noise: NoiseModel,
    pub target: TargetInfo,
    compiled: CompiledNoise,
    coi_rho: DensityMatrix,
}

impl Context {
    pub fn new(
        coi: Circuit,
        observables: Vec<PauliObservable>,
        noise: NoiseModel,
        target: TargetInfo,
    ) -> Result<Self, HarnessError> {
        if observables.is_empty() {
            return Err(HarnessError::Config("no observables".into()));
        }
        let mut bases = Vec::with_capacity(observables.len());
        for obs in &observables {
            if obs.num_qubits() != coi.num_qubits() {
                return Err(HarnessError::Config(format!(
                    "observable {obs} does not act on {} qubits",
                    coi.num_qubits()
                )));
            }
            bases.push(Basis::of(obs).ok_or_else(|| {
                HarnessError::Config(format!("observable {obs} mixes Pauli letters"))
            })?);
        }
        if noise.num_qubits() != coi.num_qubits() {
            return Err(HarnessError::Config(format!(
                "noise model has {} qubits, target has {}",
                noise.num_qubits(),
                coi.num_qubits()
            )));
        }
        let state = run_exact(&coi)?;
        let exact = observables
            .iter()
            .map(|o| expectation_exact(&state, o))
            .collect::<Result<Vec<_>, _>>()?;
        let compiled = CompiledNoise::new(&noise);
        let coi_rho = run_noisy_compiled(&coi, &compiled)?;
        Ok(Self {
            coi: Arc::new(coi),
            observables,
            bases,
            exact,
            noise,
            target,
            compiled,
            coi_rho,
        })
    }

    /// Build the target and noise model described by `config`.
    pub fn from_config(config: &ExperimentConfig) -> Result<Self, HarnessError> {
        let (coi, observables, target) = match &config.target {
            TargetConfig::Xy { qubits, seed, vqe } => {
                let model =
                    XYModel::new(*qubits).map_err(|e| HarnessError::Config(e.to_string()))?;
                let res = prepare_ground_circuit(&model, vqe, *seed)?;
                log::info!(
                    "target: {} layers, energy {} (exact {})",
                    res.layers,
                    res.energy,
                    res.exact_energy
                );
                let info = TargetInfo {
                    qubits: *qubits,
                    non_clifford: res.circuit.non_clifford_count(),
                    energy: Some(res.energy),
                    exact_energy: Some(res.exact_energy),
                    layers: Some(res.layers),
                };
                (res.circuit, half_chain_correlators(*qubits)?, info)
            }
            TargetConfig::Circuit { path, observables } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
                let coi = crate::circuit::parse_circuit(&text)
                    .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
                let obs = match observables {
                    Some(list) => list
                        .iter()
                        .map(|s| s.parse())
                        .collect::<Result<Vec<PauliObservable>, _>>()
                        .map_err(|e| HarnessError::Config(e.to_string()))?,
                    None => half_chain_correlators(coi.num_qubits())
                        .map_err(|e| HarnessError::Config(e.to_string()))?,
                };
                let info = TargetInfo {
                    qubits: coi.num_qubits(),
                    non_clifford: coi.non_clifford_count(),
                    energy: None,
                    exact_energy: None,
                    layers: None,
                };
                (coi, obs, info)
            }
        };
        if config.non_clifford > coi.non_clifford_count() {
            return Err(HarnessError::Config(format!(
                "non_clifford {} exceeds the {} non-Clifford gates of the target",
                config.non_clifford,
                coi.non_clifford_count()
            )));
        }
        let noise = build_noise(&config.noise, &coi)?;
        Self::new(coi, observables, noise, target)
    }

    pub fn num_qubits(&self) -> usize {
        self.coi.num_qubits()
    }

    /// Distinct measurement bases of the observables, in sorted order.
    pub fn coi_bases(&self) -> Vec<Basis> {
        self.bases
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    fn observables_in(&self, basis: Basis) -> Vec<usize> {
        (0..self.observables.len())
            .filter(|&j| self.bases[j] == basis)
            .collect()
    }
}

/// Noise model for `coi` as described by `config`.
pub fn build_noise(config: &NoiseConfig, coi: &Circuit) -> Result<NoiseModel, HarnessError> {
    let q = coi.num_qubits();
    match config {
        NoiseConfig::File { path } => NoiseModel::load(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display()))),
        NoiseConfig::Surrogate {
            p_range,
            seed,
            family,
            topology,
            overrides,
        } => {
            let edges = match topology {
                Some(t) => t.clone(),
                None => {
                    let pairs = coi.cnot_pairs();
                    if pairs.is_empty() {
                        ring_topology(q)
                    } else {
                        pairs
                    }
                }
            };
            let mut model = build_random_model(q, &edges, family, *p_range, *seed)
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            if let Some(path) = overrides {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
                let file: ChannelFile = serde_json::from_str(&text)
                    .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
                model
                    .apply_overrides(&file)
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
            }
            Ok(model)
        }
    }
}

/// One training circuit with its measurement basis and exact values.
#[derive(Debug, Clone)]
pub struct TrainingCircuit {
    pub circuit: Circuit,
    pub basis: Basis,
    /// `(observable index, exact value)` for observables in `basis`.
    pub exact: Vec<(usize, f64)>,
    /// Chain target and steps for MCMC circuits.
    pub target: Option<(usize, f64)>,
    pub steps: Option<usize>,
}

/// Training circuits of one instance plus any layout note.
#[derive(Debug, Clone)]
pub struct TrainingBatch {
    pub circuits: Vec<TrainingCircuit>,
    pub note: Option<String>,
}

fn with_exact(
    ctx: &Context,
    circuit: Circuit,
    basis: Basis,
) -> Result<TrainingCircuit, HarnessError> {
    let state = run_exact(&circuit)?;
    let exact = ctx
        .observables_in(basis)
        .into_iter()
        .map(|j| Ok((j, expectation_exact(&state, &ctx.observables[j])?)))
        .collect::<Result<Vec<_>, SimError>>()?;
    Ok(TrainingCircuit {
        circuit,
        basis,
        exact,
        target: None,
        steps: None,
    })
}

/// Standard training set: independent random substitutions, measured in
/// the bases chosen by [`layout_standard`].
pub fn generate_standard_batch(
    ctx: &Context,
    n_t: usize,
    instance: usize,
    non_clifford: usize,
    sigma: f64,
    seed: u64,
) -> Result<TrainingBatch, HarnessError> {
    let layout = layout_standard(n_t, instance, derive_seed(seed, &[0]));
    let circuits = layout
        .bases
        .iter()
        .enumerate()
        .map(|(i, &basis)| {
            let c = generate_standard(
                &ctx.coi,
                non_clifford,
                sigma,
                derive_seed(seed, &[1, i as u64]),
            )?;
            with_exact(ctx, c, basis)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TrainingBatch {
        circuits,
        note: layout.note,
    })
}

/// Efficient training set: one MCMC chain per `(observable, target)` of
/// [`layout_efficient`], each circuit measured in its observable's basis.
pub fn generate_efficient_batch(
    ctx: &Context,
    n_t: usize,
    mcmc: &McmcConfig,
    seed: u64,
) -> Result<TrainingBatch, HarnessError> {
    let layout = layout_efficient(n_t, ctx.observables.len(), derive_seed(seed, &[0]));
    let circuits = layout
        .chains
        .iter()
        .enumerate()
        .map(|(i, &(j, y))| {
            let out = mcmc_chain(
                &ctx.coi,
                &ctx.observables[j],
                y,
                mcmc,
                derive_seed(seed, &[1, i as u64]),
            )?;
            let mut tc = with_exact(ctx, out.circuit, ctx.bases[j])?;
            tc.target = Some((j, y));
            tc.steps = Some(out.total_steps);
            Ok(tc)
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(TrainingBatch {
        circuits,
        note: layout.note,
    })
}

/// One scored `(arm, N_t, N_s, instance)` cell entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: Arm,
    pub n_t: usize,
    pub n_s: usize,
    /// `N_s` times the number of circuit-basis runs, coi bases included.
    pub n_s_total: usize,
    pub instance: usize,
    /// Training circuits actually used (after layout rounding).
    pub circuits: usize,
    pub error_mitigated: f64,
    pub error_noisy: f64,
    /// Share of training values with `|O_exact| < 0.2`.
    pub cluster_fraction: f64,
    pub seed: u64,
    pub mitigated: Vec<f64>,
    pub noisy: Vec<f64>,
    pub exact: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedInstance {
    pub method: Arm,
    pub n_t: usize,
    /// `None` when generation failed for every `N_s`.
    pub n_s: Option<usize>,
    pub instance: usize,
    pub reason: String,
}

/// Settings for scoring one batch.
#[derive(Debug, Clone, Copy)]
pub struct ScoreSettings {
    pub fit: FitMethod,
    pub normalized: bool,
}

/// Noisy training densities, computed once per batch and sampled for
/// every shot budget.
pub struct SimulatedBatch<'a> {
    batch: &'a TrainingBatch,
    rhos: Vec<DensityMatrix>,
}

pub fn simulate_batch<'a>(
    ctx: &Context,
    batch: &'a TrainingBatch,
) -> Result<SimulatedBatch<'a>, HarnessError> {
    let rhos = batch
        .circuits
        .iter()
        .map(|tc| run_noisy_compiled(&tc.circuit, &ctx.compiled))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimulatedBatch { batch, rhos })
}

/// Shot-sample the batch and the coi with `n_s` shots per run, fit, and
/// score. `Ok(Err(reason))` marks a fit failure that excludes the row.
pub fn score_batch(
    ctx: &Context,
    sim: &SimulatedBatch<'_>,
    n_s: usize,
    settings: ScoreSettings,
    seed: u64,
) -> Result<Result<ScoredBatch, String>, HarnessError> {
    let mut ts = TrainingSet::default();
    let mut clustered = 0usize;
    for (i, (tc, rho)) in sim.batch.circuits.iter().zip(&sim.rhos).enumerate() {
        let obs: Vec<PauliObservable> = tc
            .exact
            .iter()
            .map(|&(j, _)| ctx.observables[j].clone())
            .collect();
        let est = sample_pauli_group(rho, tc.basis, &obs, n_s, derive_seed(seed, &[i as u64]))?;
        for (&(j, exact), e) in tc.exact.iter().zip(&est) {
            clustered += usize::from(exact.abs() < 0.2);
            ts.push(Sample {
                circuit: i,
                observable: j,
                exact,
                noisy: e.value,
                shots: n_s,
            });
        }
    }
    let coi_bases = ctx.coi_bases();
    for &basis in &coi_bases {
        let idx = ctx.observables_in(basis);
        let obs: Vec<PauliObservable> = idx.iter().map(|&j| ctx.observables[j].clone()).collect();
        let est = sample_pauli_group(
            &ctx.coi_rho,
            basis,
            &obs,
            n_s,
            derive_seed(seed, &[u64::MAX, basis as u64]),
        )?;
        for (j, e) in idx.into_iter().zip(est) {
            ts.coi_noisy.insert(j, e.value);
        }
    }
    let all: Vec<usize> = (0..ctx.observables.len()).collect();
    let fitted = match settings.fit {
        FitMethod::Plain => fit_plain_all(&ts, &all),
        FitMethod::Symmetric => fit_symmetric(&ts, &all),
    };
    let result = match fitted {
        Ok(r) => r,
        Err(e) => return Ok(Err(e.to_string())),
    };
    let exact: BTreeMap<usize, f64> = ctx.exact.iter().copied().enumerate().collect();
    let error_mitigated = absolute_error(&result.mitigated, &exact, settings.normalized)?;
    let error_noisy = absolute_error(&ts.coi_noisy, &exact, settings.normalized)?;
    Ok(Ok(ScoredBatch {
        n_s_total: n_s * (sim.batch.circuits.len() + coi_bases.len()),
        error_mitigated,
        error_noisy,
        cluster_fraction: if ts.samples.is_empty() {
            0.0
        } else {
            clustered as f64 / ts.samples.len() as f64
        },
        mitigated: result.mitigated.values().copied().collect(),
        noisy: ts.coi_noisy.values().copied().collect(),
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredBatch {
    pub n_s_total: usize,
    pub error_mitigated: f64,
    pub error_noisy: f64,
    pub cluster_fraction: f64,
    pub mitigated: Vec<f64>,
    pub noisy: Vec<f64>,
}

/// Rows, exclusions, and notes of a full run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub target: TargetInfo,
    pub observables: Vec<String>,
    pub rows: Vec<ResultRow>,
    pub failures: Vec<FailedInstance>,
    pub notes: Vec<String>,
}

struct JobOutput {
    rows: Vec<ResultRow>,
    failures: Vec<FailedInstance>,
    note: Option<String>,
}

fn run_job(
    ctx: &Context,
    config: &ExperimentConfig,
    arm: Arm,
    n_t: usize,
    instance: usize,
) -> Result<JobOutput, HarnessError> {
    let seed = derive_seed(
        config.master_seed,
        &[arm.tag(), n_t as u64, instance as u64],
    );
    let generated = match arm {
        Arm::Standard => generate_standard_batch(
            ctx,
            n_t,
            instance,
            config.non_clifford,
            config.sigma_sub,
            derive_seed(seed, &[0]),
        ),
        Arm::Efficient => {
            let mcmc = McmcConfig {
                non_clifford: config.non_clifford,
                ..config.mcmc.clone()
            };
            generate_efficient_batch(ctx, n_t, &mcmc, derive_seed(seed, &[0]))
        }
    };
    let batch = match generated {
        Ok(b) => b,
        Err(HarnessError::Training(e @ TrainingError::TargetNotReached { .. })) => {
            log::warn!("{} n_t={n_t} instance {instance} failed: {e}", arm.name());
            return Ok(JobOutput {
                rows: Vec::new(),
                failures: vec![FailedInstance {
                    method: arm,
                    n_t,
                    n_s: None,
                    instance,
                    reason: e.to_string(),
                }],
                note: None,
            });
        }
        Err(e) => return Err(e),
    };
    let sim = simulate_batch(ctx, &batch)?;
    let settings = ScoreSettings {
        fit: match arm {
            Arm::Standard => config.standard_fit,
            Arm::Efficient => FitMethod::Symmetric,
        },
        normalized: config.normalized_error,
    };
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &n_s in &config.n_s {
        match score_batch(
            ctx,
            &sim,
            n_s,
            settings,
            derive_seed(seed, &[1, n_s as u64]),
        )? {
            Ok(s) => rows.push(ResultRow {
                method: arm,
                n_t,
                n_s,
                n_s_total: s.n_s_total,
                instance,
                circuits: batch.circuits.len(),
                error_mitigated: s.error_mitigated,
                error_noisy: s.error_noisy,
                cluster_fraction: s.cluster_fraction,
                seed,
                mitigated: s.mitigated,
                noisy: s.noisy,
                exact: ctx.exact.clone(),
            }),
            Err(reason) => {
                log::warn!(
                    "{} n_t={n_t} n_s={n_s} instance {instance} excluded: {reason}",
                    arm.name()
                );
                failures.push(FailedInstance {
                    method: arm,
                    n_t,
                    n_s: Some(n_s),
                    instance,
                    reason,
                });
            }
        }
    }
    Ok(JobOutput {
        rows,
        failures,
        note: batch
            .note
            .map(|n| format!("{} n_t={n_t} instance {instance}: {n}", arm.name())),
    })
}

/// Run every `(arm, N_t, instance)` job on a pool of `config.workers`
/// threads. Training circuits and their noisy states are shared by all
/// shot budgets of a job; shot seeds differ per budget.
pub fn run_experiment_with(
    ctx: &Context,
    config: &ExperimentConfig,
) -> Result<ExperimentResult, HarnessError> {
    config.validate()?;
    let arms: &[Arm] = match config.method {
        MethodChoice::Standard => &[Arm::Standard],
        MethodChoice::Efficient => &[Arm::Efficient],
        MethodChoice::Both => &[Arm::Standard, Arm::Efficient],
    };
    let mut n_t = config.n_t.clone();
    n_t.sort_unstable();
    n_t.dedup();
    let jobs: Vec<(Arm, usize, usize)> = arms
        .iter()
        .flat_map(|&a| {
            n_t.iter()
                .flat_map(move |&t| (0..config.instances).map(move |i| (a, t, i)))
        })
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    let outputs = pool.install(|| {
        jobs.par_iter()
            .map(|&(a, t, i)| run_job(ctx, config, a, t, i))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for out in outputs {
        rows.extend(out.rows);
        failures.extend(out.failures);
        notes.extend(out.note);
    }
    rows.sort_by_key(|r| (r.method, r.n_t, r.n_s, r.instance));
    failures.sort_by_key(|f| (f.method, f.n_t, f.n_s, f.instance));
    Ok(ExperimentResult {
        target: ctx.target.clone(),
        observables: ctx.observables.iter().map(|o| o.label()).collect(),
        rows,
        failures,
        notes,
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    config.validate()?;
    let ctx = Context::from_config(config)?;
    run_experiment_with(&ctx, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::SurrogateFamily;
    use crate::sim::run_exact as exact_state;
    use crate::target::{build_ansatz, AnsatzSpec};

    /// Small Q=4 target with random parameters, perfect or surrogate noise.
    fn small_context(perfect: bool) -> Context {
        let template = build_ansatz(&AnsatzSpec::for_xy(4, 2), 4).unwrap();
        let params: Vec<f64> = (0..template.num_params())
            .map(|i| 0.3 + 0.17 * i as f64)
            .collect();
        let coi = template.bind(&params).unwrap();
        let noise = if perfect {
            NoiseModel::perfect(4)
        } else {
            build_random_model(
                4,
                &ring_topology(4),
                &SurrogateFamily::default(),
                (0.05, 0.15),
                1,
            )
            .unwrap()
        };
        let target = TargetInfo {
            qubits: 4,
            non_clifford: coi.non_clifford_count(),
            energy: None,
            exact_energy: None,
            layers: None,
        };
        Context::new(coi, half_chain_correlators(4).unwrap(), noise, target).unwrap()
    }

    fn config(method: MethodChoice) -> ExperimentConfig {
        let mut c: ExperimentConfig = serde_json::from_str(
            r#"{"target": {"kind": "xy", "qubits": 4},
                "noise": {"kind": "surrogate"},
                "n_t": [2, 8], "n_s": [1000, 4000], "instances": 2,
                "non_clifford": 10, "workers": 1}"#,
        )
        .unwrap();
        c.method = method;
        c
    }

    #[test]
    fn rows_and_bookkeeping() {
        let ctx = small_context(false);
        let res = run_experiment_with(&ctx, &config(MethodChoice::Both)).unwrap();
        assert!(res.failures.is_empty());
        assert_eq!(res.rows.len(), 2 * 2 * 2 * 2);
        for r in &res.rows {
            assert_eq!(r.n_s_total, r.n_s * (r.circuits + 2));
            assert_eq!(r.circuits, r.n_t);
            assert_eq!(r.exact, ctx.exact);
        }
        let keys: Vec<_> = res
            .rows
            .iter()
            .map(|r| (r.method, r.n_t, r.n_s, r.instance))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let ctx = small_context(false);
        let mut c = config(MethodChoice::Standard);
        let a = run_experiment_with(&ctx, &c).unwrap();
        c.workers = Some(3);
        let b = run_experiment_with(&ctx, &c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn standard_circuits_are_valid_training_circuits() {
        let ctx = small_context(true);
        let batch = generate_standard_batch(&ctx, 6, 0, 10, 0.5, 4).unwrap();
        assert_eq!(batch.circuits.len(), 6);
        for tc in &batch.circuits {
            assert!(crate::training::is_training_circuit(
                &ctx.coi,
                &tc.circuit,
                10
            ));
            let s = exact_state(&tc.circuit).unwrap();
            for &(j, v) in &tc.exact {
                assert_eq!(ctx.bases[j], tc.basis);
                assert_eq!(v, expectation_exact(&s, &ctx.observables[j]).unwrap());
            }
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(HarnessError::Config("x".into()).exit_code(), 2);
        assert_eq!(HarnessError::Sim(SimError::NoShots).exit_code(), 3);
    }
}
