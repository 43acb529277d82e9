//! Linear CDR fits: ordinary least squares per observable, and the
//! symmetric variant whose mitigated values are constrained to coincide.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("observable {observable}: noisy values have zero variance ({variance:e})")]
    Singular { observable: usize, variance: f64 },
    #[error("observable {observable}: need at least 2 samples, got {found}")]
    TooFewSamples { observable: usize, found: usize },
    #[error("observable {0} has no circuit-of-interest value")]
    MissingCoi(usize),
    #[error("non-finite value in training data")]
    NonFinite,
    #[error("no observables to fit")]
    NoObservables,
    #[error("value and reference key sets differ")]
    KeyMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub circuit: usize,
    pub observable: usize,
    pub exact: f64,
    pub noisy: f64,
    pub shots: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingSet {
    pub samples: Vec<Sample>,
    pub coi_noisy: BTreeMap<usize, f64>,
}

impl TrainingSet {
    pub fn push(&mut self, sample: Sample) {
        self.samples.push(sample);
    }

    /// `(noisy, exact)` pairs for observable `j`.
    pub fn pairs(&self, j: usize) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .filter(|s| s.observable == j)
            .map(|s| (s.noisy, s.exact))
            .collect()
    }

    pub fn observables(&self) -> BTreeSet<usize> {
        self.samples
            .iter()
            .map(|s| s.observable)
            .chain(self.coi_noisy.keys().copied())
            .collect()
    }

    fn check_finite(&self) -> Result<(), FitError> {
        let ok = self
            .samples
            .iter()
            .all(|s| s.exact.is_finite() && s.noisy.is_finite())
            && self.coi_noisy.values().all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(FitError::NonFinite)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub a: f64,
    pub b: f64,
    pub n_samples: usize,
}

/// Closed-form OLS of `exact ≈ a·noisy + b`.
pub fn fit_plain(ts: &TrainingSet, j: usize) -> Result<LinearFit, FitError> {
    ts.check_finite()?;
    let pairs = ts.pairs(j);
    let n = pairs.len();
    if n < 2 {
        return Err(FitError::TooFewSamples {
            observable: j,
            found: n,
        });
    }
    let nf = n as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let scale = pairs.iter().map(|p| p.0 * p.0).sum::<f64>().max(1.0);
    if sxx <= 1e-24 * scale {
        return Err(FitError::Singular {
            observable: j,
            variance: sxx / nf,
        });
    }
    let a = sxy / sxx;
    Ok(LinearFit {
        a,
        b: my - a * mx,
        n_samples: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mitigated {
    pub value: f64,
    /// Set when the value lies outside `[−1, 1]`; it is not clamped.
    pub out_of_range: bool,
}

pub fn mitigate_plain(fit: &LinearFit, coi_noisy: f64) -> Mitigated {
    let value = fit.a * coi_noisy + fit.b;
    Mitigated {
        value,
        out_of_range: !(-1.0..=1.0).contains(&value),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    Plain,
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableFit {
    pub j: usize,
    pub a: f64,
    pub b: f64,
    pub n_samples: usize,
    /// False when the coefficients were not determined by data.
    pub fitted: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub condition: f64,
    pub degenerate: bool,
    pub underdetermined: bool,
    pub objective: f64,
    pub constraint_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdrResult {
    pub method: FitMethod,
    pub per_observable: Vec<ObservableFit>,
    #[serde(rename = "c")]
    pub common_value: Option<f64>,
    pub mitigated: BTreeMap<usize, f64>,
    pub diagnostics: FitDiagnostics,
}

impl CdrResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Plain CDR over several observables. Observables that cannot be fitted
/// (fewer than two samples or zero variance) take the mean mitigated value
/// of the fitted ones, or their own noisy value when none could be fitted.
pub fn fit_plain_all(ts: &TrainingSet, observables: &[usize]) -> Result<CdrResult, FitError> {
    if observables.is_empty() {
        return Err(FitError::NoObservables);
    }
    ts.check_finite()?;
    let mut per_observable = Vec::new();
    let mut mitigated = BTreeMap::new();
    let mut unfitted = Vec::new();
    let mut objective = 0.0;
    for &j in observables {
        let coi = *ts.coi_noisy.get(&j).ok_or(FitError::MissingCoi(j))?;
        match fit_plain(ts, j) {
            Ok(fit) => {
                objective += ts
                    .pairs(j)
                    .iter()
                    .map(|(x, y)| (y - fit.a * x - fit.b).powi(2))
                    .sum::<f64>();
                mitigated.insert(j, mitigate_plain(&fit, coi).value);
                per_observable.push(ObservableFit {
                    j,
                    a: fit.a,
                    b: fit.b,
                    n_samples: fit.n_samples,
                    fitted: true,
                });
            }
            Err(FitError::Singular { .. } | FitError::TooFewSamples { .. }) => unfitted.push(j),
            Err(e) => return Err(e),
        }
    }
    let fallback = if mitigated.is_empty() {
        None
    } else {
        Some(mitigated.values().sum::<f64>() / mitigated.len() as f64)
    };
    for &j in &unfitted {
        let coi = ts.coi_noisy[&j];
        let (a, b, value) = match fallback {
            Some(v) => (0.0, v, v),
            None => (1.0, 0.0, coi),
        };
        mitigated.insert(j, value);
        per_observable.push(ObservableFit {
            j,
            a,
            b,
            n_samples: ts.pairs(j).len(),
            fitted: false,
        });
    }
    per_observable.sort_by_key(|f| f.j);
    Ok(CdrResult {
        method: FitMethod::Plain,
        per_observable,
        common_value: None,
        mitigated,
        diagnostics: FitDiagnostics {
            condition: f64::NAN,
            degenerate: !unfitted.is_empty(),
            underdetermined: !unfitted.is_empty(),
            objective,
            constraint_residual: 0.0,
        },
    })
}

/// Equality-constrained least squares over observables `1..M`:
/// minimize `Σⱼ Σᵢ (exactⱼᵢ − aⱼ·noisyⱼᵢ − bⱼ)²` subject to
/// `aⱼ·coiⱼ + bⱼ = c` for all `j`, via the KKT system.
pub fn fit_symmetric(ts: &TrainingSet, observables: &[usize]) -> Result<CdrResult, FitError> {
    if observables.is_empty() {
        return Err(FitError::NoObservables);
    }
    ts.check_finite()?;
    for &j in observables {
        if !ts.coi_noisy.contains_key(&j) {
            return Err(FitError::MissingCoi(j));
        }
    }
    // Observables without samples only appear in their constraint; they are
    // solved afterwards with the minimum-norm (a, b) reproducing c.
    let with_data: Vec<usize> = observables
        .iter()
        .copied()
        .filter(|&j| !ts.pairs(j).is_empty())
        .collect();
    let empty: Vec<usize> = observables
        .iter()
        .copied()
        .filter(|&j| ts.pairs(j).is_empty())
        .collect();
    let m = with_data.len();
    let total: usize = with_data.iter().map(|&j| ts.pairs(j).len()).sum();
    let underdetermined = total < 2 * observables.len() + 1 || !empty.is_empty();

    let (mut per_observable, mut mitigated, diagnostics, c) = if m == 0 {
        // No data at all: nothing pins c; the minimum-norm choice is c = 0.
        let diagnostics = FitDiagnostics {
            condition: f64::INFINITY,
            degenerate: true,
            underdetermined: true,
            objective: 0.0,
            constraint_residual: 0.0,
        };
        (Vec::new(), BTreeMap::new(), diagnostics, 0.0)
    } else {
        solve_kkt(ts, &with_data, underdetermined)
    };
    for &j in &empty {
        let x = ts.coi_noisy[&j];
        let norm = x * x + 1.0;
        per_observable.push(ObservableFit {
            j,
            a: c * x / norm,
            b: c / norm,
            n_samples: 0,
            fitted: false,
        });
        mitigated.insert(j, c);
    }
    per_observable.sort_by_key(|f| f.j);
    Ok(CdrResult {
        method: FitMethod::Symmetric,
        per_observable,
        common_value: Some(c),
        mitigated,
        diagnostics,
    })
}

type KktSolution = (
    Vec<ObservableFit>,
    BTreeMap<usize, f64>,
    FitDiagnostics,
    f64,
);

fn solve_kkt(ts: &TrainingSet, obs: &[usize], underdetermined: bool) -> KktSolution {
    let m = obs.len();
    let nv = 2 * m + 1;
    let dim = nv + m;
    let mut k = DMatrix::<f64>::zeros(dim, dim);
    let mut rhs = DVector::<f64>::zeros(dim);
    for (idx, &j) in obs.iter().enumerate() {
        let (ia, ib) = (2 * idx, 2 * idx + 1);
        for (x, y) in ts.pairs(j) {
            k[(ia, ia)] += 2.0 * x * x;
            k[(ia, ib)] += 2.0 * x;
            k[(ib, ia)] += 2.0 * x;
            k[(ib, ib)] += 2.0;
            rhs[ia] += 2.0 * x * y;
            rhs[ib] += 2.0 * y;
        }
        let row = nv + idx;
        let coi = ts.coi_noisy[&j];
        for (col, v) in [(ia, coi), (ib, 1.0), (2 * m, -1.0)] {
            k[(row, col)] = v;
            k[(col, row)] = v;
        }
    }
    let svd = k.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    let degenerate = !(condition < 1e12);
    let z = if degenerate {
        k.clone()
            .pseudo_inverse(1e-12 * smax)
            .map(|p| p * &rhs)
            .expect("non-negative tolerance")
    } else {
        let mut z = k.clone().lu().solve(&rhs).expect("nonsingular KKT matrix");
        // one step of iterative refinement
        let r = &rhs - &k * &z;
        if let Some(dz) = k.clone().lu().solve(&r) {
            z += dz;
        }
        z
    };
    let c = z[2 * m];
    let mut per_observable = Vec::with_capacity(m);
    let mut mitigated = BTreeMap::new();
    let mut objective = 0.0;
    let mut constraint_residual = 0.0f64;
    for (idx, &j) in obs.iter().enumerate() {
        let (a, b) = (z[2 * idx], z[2 * idx + 1]);
        let pairs = ts.pairs(j);
        objective += pairs
            .iter()
            .map(|(x, y)| (y - a * x - b).powi(2))
            .sum::<f64>();
        let value = a * ts.coi_noisy[&j] + b;
        constraint_residual = constraint_residual.max((value - c).abs());
        mitigated.insert(j, value);
        per_observable.push(ObservableFit {
            j,
            a,
            b,
            n_samples: pairs.len(),
            fitted: pairs.len() >= 2,
        });
    }
    if degenerate {
        log::warn!("symmetric fit: KKT system degenerate (condition {condition:.3e})");
    }
    let diagnostics = FitDiagnostics {
        condition,
        degenerate,
        underdetermined,
        objective,
        constraint_residual,
    };
    (per_observable, mitigated, diagnostics, c)
}

/// `|Σⱼ (valueⱼ − exactⱼ)|`, divided by `M` when `normalized`.
pub fn absolute_error(
    values: &BTreeMap<usize, f64>,
    exact: &BTreeMap<usize, f64>,
    normalized: bool,
) -> Result<f64, FitError> {
    if values.len() != exact.len() || values.keys().any(|k| !exact.contains_key(k)) {
        return Err(FitError::KeyMismatch);
    }
    if values.is_empty() {
        return Err(FitError::NoObservables);
    }
    let sum: f64 = values.iter().map(|(k, v)| v - exact[k]).sum();
    Ok(if normalized {
        sum.abs() / values.len() as f64
    } else {
        sum.abs()
    })
}
