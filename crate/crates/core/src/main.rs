use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cdr_forge::circuit::{parse_circuit, serialize_circuit, Circuit, PauliObservable};
use cdr_forge::fit::{fit_plain_all, fit_symmetric, TrainingSet};
use cdr_forge::harness::{emit_outputs, run_experiment, ExperimentConfig, HarnessError};
use cdr_forge::noise::{build_random_model, ring_topology, NoiseModel, SurrogateFamily};
use cdr_forge::rng::derive_seed;
use cdr_forge::sim::{expectation_exact, run_exact};
use cdr_forge::target::{prepare_ground_circuit, VqeConfig, XYModel};
use cdr_forge::training::{generate_standard, mcmc_chain, McmcConfig};

#[derive(Parser)]
#[command(
    name = "cdr-forge",
    version,
    about = "Clifford data regression toolkit"
)]
struct Cli {
    /// Log more (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prepare the XY ground-state circuit by VQE.
    PrepareTarget(PrepareArgs),
    /// Write a noise model channel file.
    Noise(NoiseArgs),
    /// Generate training circuits from a circuit of interest.
    GenTraining(GenArgs),
    /// Fit training data and mitigate the circuit-of-interest values.
    Fit(FitArgs),
    /// Run a full experiment grid.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Xy,
}

#[derive(Args)]
struct PrepareArgs {
    #[arg(long, value_enum, default_value = "xy")]
    model: Model,
    #[arg(long)]
    qubits: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Required energy gap to the exact ground state.
    #[arg(long)]
    energy_target: Option<f64>,
    /// Starting layer count (defaults to about 150 parameterized gates).
    #[arg(long)]
    layers: Option<usize>,
    /// Circuit file; a JSON sidecar is written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct NoiseArgs {
    /// Random mixture of the surrogate family with perfect channels.
    #[arg(long, conflicts_with = "perfect", required_unless_present = "perfect")]
    surrogate: bool,
    /// Noiseless channels.
    #[arg(long)]
    perfect: bool,
    #[arg(long)]
    qubits: usize,
    #[arg(long, default_value_t = 0.05)]
    p_lo: f64,
    #[arg(long, default_value_t = 0.15)]
    p_hi: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Take CNOT edges from this circuit instead of a ring.
    #[arg(long)]
    circuit: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum GenMethod {
    Standard,
    Mcmc,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    method: GenMethod,
    /// Circuit of interest.
    #[arg(long)]
    circuit: PathBuf,
    /// Observable as a dense Pauli string, e.g. XIIXII.
    #[arg(long)]
    observable: Option<String>,
    /// Non-Clifford gates kept in each training circuit.
    #[arg(long, default_value_t = 30)]
    non_clifford: usize,
    /// Number of standard circuits.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Substitution width.
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,
    /// MCMC targets, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    targets: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.01)]
    sigma_mcmc: f64,
    #[arg(long, default_value_t = 5)]
    n_swap: usize,
    #[arg(long, default_value_t = 20_000)]
    max_steps: usize,
    #[arg(long, default_value_t = 0.03)]
    epsilon: f64,
    #[arg(long, default_value_t = 3)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for circuits and manifest.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// Constrain all mitigated values to coincide.
    #[arg(long)]
    symmetric: bool,
    /// Training set JSON: {"samples": [...], "coi_noisy": {...}}.
    #[arg(long)]
    data: PathBuf,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; overrides the config.
    #[arg(long)]
    workers: Option<usize>,
}

fn config_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(format!("{}: {e}", path.display()))
}

fn read_circuit(path: &Path) -> Result<Circuit, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(path, e))?;
    parse_circuit(&text).map_err(|e| config_err(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), HarnessError> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

#[derive(Serialize)]
struct TargetSidecar {
    energy: f64,
    exact_energy: f64,
    layers: usize,
    seed: u64,
}

fn prepare_target(args: PrepareArgs) -> Result<(), HarnessError> {
    let Model::Xy = args.model;
    let model = XYModel::new(args.qubits).map_err(|e| HarnessError::Config(e.to_string()))?;
    let mut config = VqeConfig {
        start_layers: args.layers,
        ..VqeConfig::default()
    };
    if let Some(t) = args.energy_target {
        if t.is_nan() || t <= 0.0 {
            return Err(HarnessError::Config(format!(
                "energy target must be positive, got {t}"
            )));
        }
        config.energy_target = t;
    }
    let res = prepare_ground_circuit(&model, &config, args.seed)?;
    std::fs::write(&args.out, serialize_circuit(&res.circuit))?;
    let mut sidecar = args.out.clone().into_os_string();
    sidecar.push(".json");
    write_json(
        Path::new(&sidecar),
        &TargetSidecar {
            energy: res.energy,
            exact_energy: res.exact_energy,
            layers: res.layers,
            seed: res.seed,
        },
    )?;
    println!(
        "energy {} (exact {}, gap {:.2e}), {} layers",
        res.energy,
        res.exact_energy,
        res.gap(),
        res.layers
    );
    Ok(())
}

fn noise(args: NoiseArgs) -> Result<(), HarnessError> {
    let model = if args.perfect {
        NoiseModel::perfect(args.qubits)
    } else {
        let edges = match &args.circuit {
            Some(p) => {
                let c = read_circuit(p)?;
                if c.num_qubits() != args.qubits {
                    return Err(config_err(
                        p,
                        format!("circuit has {} qubits", c.num_qubits()),
                    ));
                }
                c.cnot_pairs()
            }
            None => ring_topology(args.qubits),
        };
        build_random_model(
            args.qubits,
            &edges,
            &SurrogateFamily::default(),
            (args.p_lo, args.p_hi),
            args.seed,
        )
        .map_err(|e| HarnessError::Config(e.to_string()))?
    };
    model.save(&args.out)?;
    Ok(())
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    observable: Option<String>,
    target: Option<f64>,
    achieved: Option<f64>,
    steps: Option<usize>,
    seed: u64,
    method: GenMethod,
}

fn gen_training(args: GenArgs) -> Result<(), HarnessError> {
    let coi = read_circuit(&args.circuit)?;
    let observable: Option<PauliObservable> = args
        .observable
        .as_deref()
        .map(|s| {
            s.parse()
                .map_err(|e| HarnessError::Config(format!("observable: {e}")))
        })
        .transpose()?;
    if let Some(o) = &observable {
        if o.num_qubits() != coi.num_qubits() {
            return Err(HarnessError::Config(format!(
                "observable {o} does not act on {} qubits",
                coi.num_qubits()
            )));
        }
    }
    if args.non_clifford > coi.non_clifford_count() {
        return Err(HarnessError::Config(format!(
            "non-clifford {} exceeds the circuit's {}",
            args.non_clifford,
            coi.non_clifford_count()
        )));
    }
    std::fs::create_dir_all(&args.out)?;
    let mut manifest = Vec::new();
    match args.method {
        GenMethod::Standard => {
            for i in 0..args.count {
                let seed = derive_seed(args.seed, &[i as u64]);
                let c = generate_standard(&coi, args.non_clifford, args.sigma, seed)
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                let achieved = match &observable {
                    Some(o) => Some(expectation_exact(&run_exact(&c)?, o)?),
                    None => None,
                };
                let file = format!("train_{i:03}.circ");
                std::fs::write(args.out.join(&file), serialize_circuit(&c))?;
                manifest.push(ManifestEntry {
                    file,
                    observable: observable.as_ref().map(|o| o.to_string()),
                    target: None,
                    achieved,
                    steps: None,
                    seed,
                    method: args.method,
                });
            }
        }
        GenMethod::Mcmc => {
            let obs =
                observable.ok_or_else(|| HarnessError::Config("mcmc needs --observable".into()))?;
            let config = McmcConfig {
                sigma_mcmc: args.sigma_mcmc,
                n_swap: args.n_swap,
                sigma_sub: args.sigma,
                non_clifford: args.non_clifford,
                targets: args
                    .targets
                    .unwrap_or_else(|| McmcConfig::default().targets),
                max_steps: args.max_steps,
                epsilon_target: args.epsilon,
                restarts: args.restarts,
            };
            config
                .validate()
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            for (i, &y) in config.targets.iter().enumerate() {
                let out = mcmc_chain(&coi, &obs, y, &config, derive_seed(args.seed, &[i as u64]))?;
                let file = format!("train_{i:03}.circ");
                std::fs::write(args.out.join(&file), serialize_circuit(&out.circuit))?;
                manifest.push(ManifestEntry {
                    file,
                    observable: Some(obs.to_string()),
                    target: Some(y),
                    achieved: Some(out.achieved),
                    steps: Some(out.total_steps),
                    seed: out.seed,
                    method: args.method,
                });
            }
        }
    }
    write_json(&args.out.join("manifest.json"), &manifest)?;
    println!(
        "wrote {} circuits to {}",
        manifest.len(),
        args.out.display()
    );
    Ok(())
}

fn fit(args: FitArgs) -> Result<(), HarnessError> {
    let text = std::fs::read_to_string(&args.data).map_err(|e| config_err(&args.data, e))?;
    let ts: TrainingSet = serde_json::from_str(&text).map_err(|e| config_err(&args.data, e))?;
    let observables: Vec<usize> = ts.observables().into_iter().collect();
    let result = if args.symmetric {
        fit_symmetric(&ts, &observables)?
    } else {
        fit_plain_all(&ts, &observables)?
    };
    let json = result.to_json() + "\n";
    match &args.out {
        Some(p) => std::fs::write(p, json)?,
        None => print!("{json}"),
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), HarnessError> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if args.workers.is_some() {
        config.workers = args.workers;
    }
    let dir = args.out.or_else(|| config.output.clone()).ok_or_else(|| {
        HarnessError::Config("no output directory (--out or config output)".into())
    })?;
    let result = run_experiment(&config)?;
    let summary = emit_outputs(&result, &dir)?;
    for cell in &summary.cells {
        println!(
            "{:<9} n_t={:<3} n_s={:<6} mitigated mean {:.4} max {:.4} | noisy mean {:.4}",
            cell.method.name(),
            cell.n_t,
            cell.n_s,
            cell.mitigated.mean,
            cell.mitigated.max,
            cell.noisy.mean
        );
    }
    if !result.failures.is_empty() {
        println!(
            "{} instance(s) excluded; see summary.json",
            result.failures.len()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match cli.command {
        Command::PrepareTarget(a) => prepare_target(a),
        Command::Noise(a) => noise(a),
        Command::GenTraining(a) => gen_training(a),
        Command::Fit(a) => fit(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
