//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cdr_forge::circuit::{nearest_clifford_index, Circuit, Gate, PauliObservable};
use cdr_forge::fit::{fit_plain, fit_symmetric, Sample, TrainingSet};
use cdr_forge::harness::{run_experiment_with, Arm, Context, ExperimentConfig};
use cdr_forge::noise::{build_random_model, NoiseModel, SurrogateFamily, CPTP_TOLERANCE};
use cdr_forge::rng::rng_from_seed;
use cdr_forge::sim::{
    expectation_exact, expectation_noisy, run_exact, run_noisy, sample_pauli_group, Basis,
    DensityMatrix, StateVector,
};
use cdr_forge::target::{
    exact_ground, half_chain_correlators, prepare_ground_circuit, VqeConfig, VqeResult, XYModel,
};
use cdr_forge::training::{generate_standard, mcmc_chain, target_grid, McmcConfig};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Q=6 XY circuit of interest, shared by several criteria.
fn q6_target() -> &'static VqeResult {
    static CELL: std::sync::OnceLock<VqeResult> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        prepare_ground_circuit(&XYModel::new(6).unwrap(), &VqeConfig::default(), 0).unwrap()
    })
}

fn x1x4() -> PauliObservable {
    "XIIXII".parse().unwrap()
}

fn ols_recovery() -> Outcome {
    let mut rng = rng_from_seed(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let a = rng.random_range(0.5..2.0);
        let b = rng.random_range(-0.3..0.3);
        let mut ts = TrainingSet::default();
        for i in 0..10 {
            let exact: f64 = rng.random_range(-1.0..1.0);
            ts.push(Sample {
                circuit: i,
                observable: 0,
                exact,
                noisy: (exact - b) / a,
                shots: 1,
            });
        }
        let fit = fit_plain(&ts, 0).map_err(|e| e.to_string())?;
        worst = worst.max((fit.a - a).abs()).max((fit.b - b).abs());
    }
    check(
        worst <= 1e-9,
        format!("max |Δa|,|Δb| = {worst:.2e} over 50 sets"),
    )
}

/// Quadratic penalty formulation solved as one stacked least-squares problem:
/// rows `(a_j x + b_j − y)` and `√μ (a_j x_coi + b_j − c)`.
fn penalty_solution(data: &[Vec<(f64, f64)>], coi: &[f64], mu: f64) -> DVector<f64> {
    let m = data.len();
    let rows: usize = data.iter().map(Vec::len).sum::<usize>() + m;
    let mut a = DMatrix::<f64>::zeros(rows, 2 * m + 1);
    let mut y = DVector::<f64>::zeros(rows);
    let mut r = 0;
    for (j, pairs) in data.iter().enumerate() {
        for &(x, v) in pairs {
            a[(r, 2 * j)] = x;
            a[(r, 2 * j + 1)] = 1.0;
            y[r] = v;
            r += 1;
        }
    }
    let s = mu.sqrt();
    for j in 0..m {
        a[(r, 2 * j)] = s * coi[j];
        a[(r, 2 * j + 1)] = s;
        a[(r, 2 * m)] = -s;
        r += 1;
    }
    a.svd(true, true).solve(&y, 1e-14).unwrap()
}

fn symmetric_fit_oracle() -> Outcome {
    let mut rng = rng_from_seed(2);
    let (mut d_sol, mut d_obj, mut resid, mut d_plain) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let data: Vec<Vec<(f64, f64)>> = (0..4)
            .map(|_| {
                let (a, b) = (rng.random_range(0.5..3.0), rng.random_range(-0.2..0.2));
                (0..5)
                    .map(|_| {
                        let x: f64 = rng.random_range(-0.5..0.5);
                        (x, a * x + b + rng.random_range(-0.05..0.05))
                    })
                    .collect()
            })
            .collect();
        let coi: Vec<f64> = (0..4).map(|_| rng.random_range(-0.3..0.3)).collect();
        let mut ts = TrainingSet::default();
        for (j, pairs) in data.iter().enumerate() {
            for (i, &(x, y)) in pairs.iter().enumerate() {
                ts.push(Sample {
                    circuit: 5 * j + i,
                    observable: j,
                    exact: y,
                    noisy: x,
                    shots: 1,
                });
            }
            ts.coi_noisy.insert(j, coi[j]);
        }
        let res = fit_symmetric(&ts, &[0, 1, 2, 3]).map_err(|e| e.to_string())?;
        let z = penalty_solution(&data, &coi, 1e10);
        for (j, f) in res.per_observable.iter().enumerate() {
            d_sol = d_sol
                .max((f.a - z[2 * j]).abs())
                .max((f.b - z[2 * j + 1]).abs());
        }
        d_sol = d_sol.max((res.common_value.unwrap() - z[8]).abs());
        let obj: f64 = data
            .iter()
            .enumerate()
            .map(|(j, p)| {
                p.iter()
                    .map(|(x, y)| (z[2 * j] * x + z[2 * j + 1] - y).powi(2))
                    .sum::<f64>()
            })
            .sum();
        d_obj = d_obj.max((obj - res.diagnostics.objective).abs());
        resid = resid.max(res.diagnostics.constraint_residual);

        // One observable: the constraint only defines c.
        let mut single = TrainingSet {
            samples: ts
                .samples
                .iter()
                .filter(|s| s.observable == 0)
                .copied()
                .collect(),
            ..TrainingSet::default()
        };
        single.coi_noisy.insert(0, coi[0]);
        let sym = fit_symmetric(&single, &[0]).map_err(|e| e.to_string())?;
        let plain = fit_plain(&single, 0).map_err(|e| e.to_string())?;
        let f = &sym.per_observable[0];
        d_plain = d_plain
            .max((f.a - plain.a).abs())
            .max((f.b - plain.b).abs());
    }
    check(
        d_sol <= 1e-6 && d_obj <= 1e-6 && resid <= 1e-8 && d_plain <= 1e-9,
        format!(
            "solution Δ {d_sol:.1e}, objective Δ {d_obj:.1e}, constraint residual {resid:.1e}, M=1 vs plain {d_plain:.1e}"
        ),
    )
}

fn sampling_law() -> Outcome {
    let coi = Circuit::new(
        1,
        vec![Gate::RZ {
            qubit: 0,
            angle: FRAC_PI_4,
        }],
    )
    .unwrap();
    let draws = 100_000u64;
    let mut counts = [0u64; 4];
    for seed in 0..draws {
        let c = generate_standard(&coi, 0, 0.5, seed).map_err(|e| e.to_string())?;
        counts[nearest_clifford_index(c.gates()[0].angle().unwrap()) as usize] += 1;
    }
    // Expected law from the phase-fixed Frobenius distance, computed directly.
    let sigma: f64 = 0.5;
    let w: Vec<f64> = (0..4)
        .map(|k| {
            let d = (Complex64::from_polar(1.0, FRAC_PI_4)
                - Complex64::from_polar(1.0, k as f64 * std::f64::consts::FRAC_PI_2))
            .norm();
            (-d * d / (sigma * sigma)).exp()
        })
        .collect();
    let total: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / total).collect();
    let bins = [
        (counts[0] as f64, p[0]),
        (counts[1] as f64, p[1]),
        ((counts[2] + counts[3]) as f64, p[2] + p[3]),
    ];
    let stat: f64 = bins
        .iter()
        .map(|&(o, q)| {
            let e = q * draws as f64;
            (o - e).powi(2) / e
        })
        .sum();
    let pval = 1.0 - ChiSquared::new(2.0).unwrap().cdf(stat);
    check(
        pval > 0.01,
        format!(
            "counts {counts:?}, expected p = [{:.5}, {:.5}, {:.2e}, {:.2e}], chi2 {stat:.2}, p-value {pval:.3}",
            p[0], p[1], p[2], p[3]
        ),
    )
}

fn mcmc_attainment() -> Outcome {
    let coi = &q6_target().circuit;
    let obs = x1x4();
    let config = McmcConfig {
        restarts: 0,
        max_steps: 20_000,
        ..McmcConfig::default()
    };
    let mut lines = Vec::new();
    let mut ok = true;
    for y in [-0.5, 0.0, 0.5] {
        let mut hits = 0;
        let mut max_steps = 0;
        for seed in 0..20 {
            if let Ok(out) = mcmc_chain(coi, &obs, y, &config, seed) {
                hits += 1;
                max_steps = max_steps.max(out.steps);
            }
        }
        ok &= hits >= 18;
        lines.push(format!("y={y}: {hits}/20 (max {max_steps} steps)"));
    }
    check(
        ok,
        format!(
            "{} non-Cliffords; {}",
            coi.non_clifford_count(),
            lines.join(", ")
        ),
    )
}

fn clustering() -> Outcome {
    let coi = &q6_target().circuit;
    let obs = x1x4();
    let value = |c: &Circuit| expectation_exact(&run_exact(c).unwrap(), &obs).unwrap();
    let standard: Vec<f64> = (0..100)
        .map(|s| generate_standard(coi, 30, 0.5, 1000 + s).map(|c| value(&c)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let config = McmcConfig::default();
    let mut mcmc = Vec::new();
    for (t, &y) in target_grid(5).unwrap().iter().enumerate() {
        for s in 0..20 {
            let out = mcmc_chain(coi, &obs, y, &config, (t * 100 + s) as u64)
                .map_err(|e| e.to_string())?;
            mcmc.push(out.achieved);
        }
    }
    let frac = |v: &[f64]| v.iter().filter(|x| x.abs() < 0.2).count() as f64 / v.len() as f64;
    let span = mcmc.iter().cloned().fold(f64::MIN, f64::max)
        - mcmc.iter().cloned().fold(f64::MAX, f64::min);
    let (fs, fm) = (frac(&standard), frac(&mcmc));
    check(
        fs > fm && span >= 0.8,
        format!("|O|<0.2 fraction: standard {fs:.2}, mcmc {fm:.2}; mcmc span {span:.3}"),
    )
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn shot_efficiency() -> Outcome {
    let config: ExperimentConfig = serde_json::from_str(
        r#"{"target": {"kind": "xy", "qubits": 6},
            "noise": {"kind": "surrogate", "p_range": [0.05, 0.15], "seed": 17},
            "method": "both", "n_t": [2, 6, 12, 30], "n_s": [1000, 10000],
            "instances": 20, "master_seed": 2024}"#,
    )
    .unwrap();
    let target = q6_target();
    let noise = cdr_forge::harness::build_noise(&config.noise, &target.circuit)
        .map_err(|e| e.to_string())?;
    let info = cdr_forge::harness::TargetInfo {
        qubits: 6,
        non_clifford: target.circuit.non_clifford_count(),
        energy: Some(target.energy),
        exact_energy: Some(target.exact_energy),
        layers: Some(target.layers),
    };
    let ctx = Context::new(
        target.circuit.clone(),
        half_chain_correlators(6).unwrap(),
        noise,
        info,
    )
    .map_err(|e| e.to_string())?;
    let res = run_experiment_with(&ctx, &config).map_err(|e| e.to_string())?;
    let mut cells: BTreeMap<(usize, usize), [Vec<f64>; 3]> = BTreeMap::new();
    let mut totals = BTreeMap::new();
    for r in &res.rows {
        let cell = cells.entry((r.n_t, r.n_s)).or_default();
        match r.method {
            Arm::Standard => cell[0].push(r.error_mitigated),
            Arm::Efficient => {
                cell[1].push(r.error_mitigated);
                cell[2].push(r.error_noisy);
                totals.insert((r.n_t, r.n_s), r.n_s_total);
            }
        }
    }
    let mut ok = res.failures.is_empty();
    let mut parts = Vec::new();
    for ((n_t, n_s), [mut std_e, mut eff_e, mut noisy_e]) in cells {
        let (ms, me, mn) = (median(&mut std_e), median(&mut eff_e), median(&mut noisy_e));
        let mut pass = me <= ms;
        if totals[&(n_t, n_s)] >= 10_000 {
            pass &= me <= mn / 1.5;
        }
        ok &= pass;
        parts.push(format!(
            "(N_t={n_t}, N_s={n_s}) eff {me:.3} std {ms:.3} noisy {mn:.3}{}",
            if pass { "" } else { " ✗" }
        ));
    }
    check(
        ok,
        format!(
            "{} rows, {} excluded; {}",
            res.rows.len(),
            res.failures.len(),
            parts.join("; ")
        ),
    )
}

fn noise_validity() -> Outcome {
    let coi = &q6_target().circuit;
    let edges = coi.cnot_pairs();
    let (mut worst_tp, mut worst_eig) = (0.0f64, f64::MAX);
    let mut all = true;
    for seed in 0..20 {
        let model = build_random_model(6, &edges, &SurrogateFamily::default(), (0.05, 0.15), seed)
            .map_err(|e| e.to_string())?;
        for (_, d) in model.diagnostics(CPTP_TOLERANCE) {
            all &= d.passed;
            worst_tp = worst_tp.max(d.trace_residual);
            worst_eig = worst_eig.min(d.min_choi_eigenvalue);
        }
    }
    let limit = build_random_model(6, &edges, &SurrogateFamily::default(), (0.0, 0.0), 0)
        .map_err(|e| e.to_string())?;
    let mut worst_perfect = 0.0f64;
    for model in [limit, NoiseModel::perfect(6)] {
        let rho = run_noisy(coi, &model).map_err(|e| e.to_string())?;
        let psi = run_exact(coi).map_err(|e| e.to_string())?;
        for o in half_chain_correlators(6)
            .unwrap()
            .iter()
            .chain([&"ZZIIII".parse().unwrap()])
        {
            let d = expectation_noisy(&rho, o).unwrap() - expectation_exact(&psi, o).unwrap();
            worst_perfect = worst_perfect.max(d.abs());
        }
    }
    check(
        all && worst_tp <= 1e-10 && worst_eig >= -1e-8 && worst_perfect <= 1e-8,
        format!(
            "trace residual {worst_tp:.1e}, min Choi eigenvalue {worst_eig:.1e}, perfect-limit Δ {worst_perfect:.1e}"
        ),
    )
}

fn vqe_target() -> Outcome {
    let res = q6_target();
    let model = XYModel::new(6).unwrap();
    let dense = exact_ground(&model).unwrap().energy;
    let state = run_exact(&res.circuit).unwrap();
    let values: Vec<f64> = half_chain_correlators(6)
        .unwrap()
        .iter()
        .map(|o| expectation_exact(&state, o).unwrap())
        .collect();
    let spread = values.iter().cloned().fold(f64::MIN, f64::max)
        - values.iter().cloned().fold(f64::MAX, f64::min);
    let gap = res.energy - dense;
    check(
        gap.abs() <= 1e-6 && spread <= 1e-8,
        format!(
            "E = {:.12} vs {dense:.12} (gap {gap:.1e}), correlator spread {spread:.1e}, {} layers",
            res.energy, res.layers
        ),
    )
}

fn shot_statistics() -> Outcome {
    // SX|0⟩ points along −Y, so ⟨Z⟩ = 0.
    let mut psi = StateVector::zero(1);
    psi.apply(&Gate::SX(0));
    let rho = DensityMatrix::from_pure(&psi);
    let z: PauliObservable = "Z".parse().unwrap();
    let est: Vec<f64> = (0..100)
        .map(|s| {
            sample_pauli_group(&rho, Basis::Z, std::slice::from_ref(&z), 10_000, s).unwrap()[0]
                .value
        })
        .collect();
    let mean = est.iter().sum::<f64>() / 100.0;
    let std = (est.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 99.0).sqrt();
    check(
        (0.7e-2..=1.3e-2).contains(&std),
        format!("std {std:.4e} of 100 estimates"),
    )
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("exp.json");
    std::fs::write(
        &config,
        r#"{"target": {"kind": "xy", "qubits": 6},
            "noise": {"kind": "surrogate", "seed": 5},
            "n_t": [2, 12], "n_s": [1000], "instances": 3, "master_seed": 99}"#,
    )
    .map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let status = Command::new(env!("CARGO_BIN_EXE_cdr-forge"))
            .args(["bench", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(dir.path().join(run))
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(String::from_utf8_lossy(&status.stderr).into_owned());
        }
        outputs.push(
            std::fs::read(dir.path().join(run).join("results.csv")).map_err(|e| e.to_string())?,
        );
    }
    check(
        outputs[0] == outputs[1],
        format!(
            "results.csv {} bytes, identical: {}",
            outputs[0].len(),
            outputs[0] == outputs[1]
        ),
    )
}

fn main() -> ExitCode {
    // Accept and ignore libtest flags passed by `cargo test`.
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: [Criterion; 10] = [
        ("OLS recovery", ols_recovery),
        ("symmetric fit vs penalty oracle", symmetric_fit_oracle),
        ("substitution sampling law", sampling_law),
        ("MCMC target attainment", mcmc_attainment),
        ("training-value clustering", clustering),
        ("shot-efficiency ordering", shot_efficiency),
        ("noise-model validity", noise_validity),
        ("VQE ground-state target", vqe_target),
        ("shot estimator statistics", shot_statistics),
        ("bench reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = Duration::as_secs_f64(&start.elapsed());
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name} [{secs:.1}s]: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.1}s]: {d}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
