use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::fit::FitMethod;
use crate::noise::SurrogateFamily;
use crate::target::VqeConfig;
use crate::training::McmcConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetConfig {
    /// Prepare the XY ground state by VQE.
    Xy {
        qubits: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        vqe: VqeConfig,
    },
    /// Load a circuit file. Observables default to the half-chain correlators.
    Circuit {
        path: PathBuf,
        #[serde(default)]
        observables: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseConfig {
    Surrogate {
        #[serde(default = "default_p_range")]
        p_range: (f64, f64),
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        family: SurrogateFamily,
        /// Undirected edges; defaults to the CNOT pairs of the target.
        #[serde(default)]
        topology: Option<Vec<(usize, usize)>>,
        /// Channel file whose entries replace the surrogate ones.
        #[serde(default)]
        overrides: Option<PathBuf>,
    },
    File {
        path: PathBuf,
    },
}

fn default_p_range() -> (f64, f64) {
    (0.05, 0.15)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Standard,
    Efficient,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub target: TargetConfig,
    pub noise: NoiseConfig,
    #[serde(default = "default_method")]
    pub method: MethodChoice,
    pub n_t: Vec<usize>,
    pub n_s: Vec<usize>,
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default = "default_non_clifford")]
    pub non_clifford: usize,
    /// Substitution width for standard training circuits.
    #[serde(default = "default_sigma")]
    pub sigma_sub: f64,
    #[serde(default)]
    pub mcmc: McmcConfig,
    /// Fit applied to standard training data.
    #[serde(default = "default_standard_fit")]
    pub standard_fit: FitMethod,
    /// Divide the error sum by the number of observables.
    #[serde(default)]
    pub normalized_error: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub master_seed: u64,
    /// Worker threads; `None` uses every available core.
    #[serde(default)]
    pub workers: Option<usize>,
}

fn default_method() -> MethodChoice {
    MethodChoice::Both
}
fn default_instances() -> usize {
    10
}
fn default_non_clifford() -> usize {
    30
}
fn default_sigma() -> f64 {
    0.5
}
fn default_standard_fit() -> FitMethod {
    FitMethod::Plain
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        let mut config: Self = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        config.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        config.validate()?;
        Ok(config)
    }

    /// Make relative file references relative to the config's directory.
    fn resolve_paths(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        match &mut self.target {
            TargetConfig::Circuit { path, .. } => fix(path),
            TargetConfig::Xy { .. } => {}
        }
        match &mut self.noise {
            NoiseConfig::File { path } => fix(path),
            NoiseConfig::Surrogate {
                overrides: Some(p), ..
            } => fix(p),
            NoiseConfig::Surrogate { .. } => {}
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.n_t.is_empty() || self.n_s.is_empty() {
            return bad("n_t and n_s must be nonempty".into());
        }
        if let Some(&n) = self.n_t.iter().find(|&&n| n < 2) {
            return bad(format!("n_t values must be at least 2, got {n}"));
        }
        if self.n_s.contains(&0) {
            return bad("n_s values must be positive".into());
        }
        if self.instances == 0 {
            return bad("instances must be at least 1".into());
        }
        if !(self.sigma_sub > 0.0) {
            return bad("sigma_sub must be positive".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if let NoiseConfig::Surrogate {
            p_range: (lo, hi), ..
        } = self.noise
        {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return bad(format!("invalid p_range [{lo}, {hi}]"));
            }
        }
        self.mcmc.validate().or_else(|e| bad(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "target": {"kind": "xy", "qubits": 6},
        "noise": {"kind": "surrogate"},
        "n_t": [2, 6],
        "n_s": [1000]
    }"#;

    #[test]
    fn defaults_fill_in() {
        let c: ExperimentConfig = serde_json::from_str(MINIMAL).unwrap();
        c.validate().unwrap();
        assert_eq!(c.instances, 10);
        assert_eq!(c.non_clifford, 30);
        assert_eq!(c.method, MethodChoice::Both);
        assert_eq!(c.mcmc.sigma_mcmc, 0.01);
        match c.noise {
            NoiseConfig::Surrogate { p_range, .. } => assert_eq!(p_range, (0.05, 0.15)),
            _ => panic!(),
        }
    }

    #[test]
    fn invalid_values_rejected() {
        let mut c: ExperimentConfig = serde_json::from_str(MINIMAL).unwrap();
        c.n_t = vec![1];
        assert!(matches!(c.validate(), Err(HarnessError::Config(_))));
        let mut c: ExperimentConfig = serde_json::from_str(MINIMAL).unwrap();
        c.instances = 0;
        assert!(c.validate().is_err());
        let unknown = MINIMAL.replace("\"n_s\"", "\"bogus\": 1, \"n_s\"");
        assert!(serde_json::from_str::<ExperimentConfig>(&unknown).is_err());
    }
}
