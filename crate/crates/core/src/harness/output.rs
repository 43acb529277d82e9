use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Arm, ExperimentResult, FailedInstance, HarnessError, ResultRow, TargetInfo};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub mean: f64,
    pub max: f64,
    pub median: f64,
}

impl ErrorStats {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        };
        Some(Self {
            mean: v.iter().sum::<f64>() / n as f64,
            max: v[n - 1],
            median,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub method: Arm,
    pub n_t: usize,
    pub n_s: usize,
    pub n_s_total: usize,
    pub instances: usize,
    pub mitigated: ErrorStats,
    pub noisy: ErrorStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub target: TargetInfo,
    pub observables: Vec<String>,
    pub n_s_total_formula: String,
    pub cells: Vec<CellSummary>,
    pub failures: Vec<FailedInstance>,
    pub notes: Vec<String>,
}

/// Per-cell statistics over instances.
pub fn summarize(result: &ExperimentResult) -> Summary {
    let mut cells: BTreeMap<(Arm, usize, usize), Vec<&ResultRow>> = BTreeMap::new();
    for r in &result.rows {
        cells.entry((r.method, r.n_t, r.n_s)).or_default().push(r);
    }
    let cells = cells
        .into_iter()
        .map(|((method, n_t, n_s), rows)| {
            let m: Vec<f64> = rows.iter().map(|r| r.error_mitigated).collect();
            let n: Vec<f64> = rows.iter().map(|r| r.error_noisy).collect();
            CellSummary {
                method,
                n_t,
                n_s,
                n_s_total: rows.iter().map(|r| r.n_s_total).max().unwrap_or(0),
                instances: rows.len(),
                mitigated: ErrorStats::of(&m).expect("cell has rows"),
                noisy: ErrorStats::of(&n).expect("cell has rows"),
            }
        })
        .collect();
    Summary {
        target: result.target.clone(),
        observables: result.observables.clone(),
        n_s_total_formula:
            "N_s * (training circuits + measurement bases of the circuit of interest); \
                            coi measurements are counted"
                .into(),
        cells,
        failures: result.failures.clone(),
        notes: result.notes.clone(),
    }
}

fn results_csv(result: &ExperimentResult) -> String {
    let mut out = String::from(
        "method,n_t,n_s,n_s_total,instance,circuits,error_mitigated,error_noisy,cluster_fraction,seed",
    );
    for prefix in ["mitigated", "noisy", "exact"] {
        for label in &result.observables {
            write!(out, ",{prefix}_{label}").unwrap();
        }
    }
    out.push('\n');
    for r in &result.rows {
        write!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.method.name(),
            r.n_t,
            r.n_s,
            r.n_s_total,
            r.instance,
            r.circuits,
            r.error_mitigated,
            r.error_noisy,
            r.cluster_fraction,
            r.seed
        )
        .unwrap();
        for v in r.mitigated.iter().chain(&r.noisy).chain(&r.exact) {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Write `results.csv`, `summary.json` and `plotdata/*.csv` into `dir`.
pub fn emit_outputs(result: &ExperimentResult, dir: &Path) -> Result<Summary, HarnessError> {
    if result.rows.is_empty() {
        return Err(HarnessError::Config("no result rows to write".into()));
    }
    let plot_dir = dir.join("plotdata");
    std::fs::create_dir_all(&plot_dir)?;
    std::fs::write(dir.join("results.csv"), results_csv(result))?;
    let summary = summarize(result);
    std::fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)? + "\n",
    )?;

    let mut by_series: BTreeMap<(&str, usize), String> = BTreeMap::new();
    for cell in &summary.cells {
        let text = by_series
            .entry((cell.method.name(), cell.n_s))
            .or_insert_with(|| "N_s_total,mean_error,max_error\n".into());
        writeln!(
            text,
            "{},{},{}",
            cell.n_s_total, cell.mitigated.mean, cell.mitigated.max
        )
        .unwrap();
    }
    // Unmitigated baseline: only the coi runs are spent.
    let mut noisy: BTreeMap<usize, (usize, Vec<f64>)> = BTreeMap::new();
    for r in &result.rows {
        let entry = noisy.entry(r.n_s).or_default();
        entry.0 = r.n_s_total - r.n_s * r.circuits;
        entry.1.push(r.error_noisy);
    }
    for (n_s, (total, errors)) in noisy {
        let s = ErrorStats::of(&errors).expect("nonempty");
        by_series.insert(
            ("noisy", n_s),
            format!(
                "N_s_total,mean_error,max_error\n{total},{},{}\n",
                s.mean, s.max
            ),
        );
    }
    for ((name, n_s), text) in by_series {
        std::fs::write(plot_dir.join(format!("{name}_ns{n_s}.csv")), text)?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats() {
        let s = ErrorStats::of(&[3.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!(s.max, 10.0);
        assert_eq!(s.median, 2.5);
        assert_eq!(s.mean, 4.0);
        assert!(ErrorStats::of(&[]).is_none());
    }
}
