//! The `cdr-forge` binary: outputs and exit codes.

use std::path::Path;
use std::process::Command;

fn run(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cdr-forge"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap();
    let text =
        String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn pipeline_subcommands() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let (code, out) = run(
        d,
        &[
            "prepare-target",
            "--model",
            "xy",
            "--qubits",
            "4",
            "--out",
            "coi.circ",
        ],
    );
    assert_eq!(code, 0, "{out}");
    let side = json(&d.join("coi.circ.json"));
    for key in ["energy", "exact_energy", "layers", "seed"] {
        assert!(side.get(key).is_some(), "{key}");
    }
    assert!(
        (side["energy"].as_f64().unwrap() - side["exact_energy"].as_f64().unwrap()).abs() < 1e-6
    );

    let (code, out) = run(
        d,
        &[
            "noise",
            "--surrogate",
            "--qubits",
            "4",
            "--p-lo",
            "0.05",
            "--p-hi",
            "0.15",
            "--seed",
            "1",
            "--out",
            "noise.json",
        ],
    );
    assert_eq!(code, 0, "{out}");
    assert_eq!(json(&d.join("noise.json"))["qubits"], 4);

    let (code, out) = run(
        d,
        &[
            "gen-training",
            "--method",
            "mcmc",
            "--circuit",
            "coi.circ",
            "--observable",
            "XIXI",
            "--non-clifford",
            "10",
            "--targets",
            "-0.5,0.5",
            "--out",
            "mc",
        ],
    );
    assert_eq!(code, 0, "{out}");
    let manifest = json(&d.join("mc/manifest.json"));
    let entries = manifest.as_array().unwrap();
    assert_eq!(entries.len(), 2);
    for e in entries {
        assert!(d.join("mc").join(e["file"].as_str().unwrap()).exists());
        let gap = (e["achieved"].as_f64().unwrap() - e["target"].as_f64().unwrap()).abs();
        assert!(gap <= 0.03);
        assert_eq!(e["method"], "mcmc");
        assert!(e["steps"].is_u64() && e["seed"].is_u64());
    }

    let (code, out) = run(
        d,
        &[
            "gen-training",
            "--method",
            "standard",
            "--circuit",
            "coi.circ",
            "--count",
            "4",
            "--non-clifford",
            "10",
            "--out",
            "st",
        ],
    );
    assert_eq!(code, 0, "{out}");
    assert_eq!(
        json(&d.join("st/manifest.json")).as_array().unwrap().len(),
        4
    );

    std::fs::write(
        d.join("data.json"),
        r#"{"samples": [
            {"circuit": 0, "observable": 0, "exact": 0.5, "noisy": 0.25, "shots": 100},
            {"circuit": 1, "observable": 0, "exact": -0.5, "noisy": -0.25, "shots": 100},
            {"circuit": 2, "observable": 1, "exact": 0.4, "noisy": 0.2, "shots": 100},
            {"circuit": 3, "observable": 1, "exact": -0.4, "noisy": -0.2, "shots": 100}],
           "coi_noisy": {"0": 0.1, "1": 0.1}}"#,
    )
    .unwrap();
    let (code, out) = run(
        d,
        &[
            "fit",
            "--symmetric",
            "--data",
            "data.json",
            "--out",
            "fit.json",
        ],
    );
    assert_eq!(code, 0, "{out}");
    let report = json(&d.join("fit.json"));
    assert!((report["c"].as_f64().unwrap() - 0.2).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    // Usage and configuration errors.
    assert_eq!(run(d, &["noise", "--qubits", "4", "--out", "n.json"]).0, 2);
    assert_eq!(
        run(d, &["prepare-target", "--qubits", "3", "--out", "c.circ"]).0,
        2
    );
    assert_eq!(
        run(d, &["bench", "--config", "missing.json", "--out", "o"]).0,
        2
    );
    std::fs::write(d.join("bad.json"), r#"{"target": {"kind": "xy", "qubits": 4}, "noise": {"kind": "surrogate"}, "n_t": [1], "n_s": [10]}"#).unwrap();
    assert_eq!(
        run(d, &["bench", "--config", "bad.json", "--out", "o"]).0,
        2
    );
    // A chain that cannot reach its target is a runtime failure.
    assert_eq!(
        run(d, &["prepare-target", "--qubits", "4", "--out", "coi.circ"]).0,
        0
    );
    let (code, out) = run(
        d,
        &[
            "gen-training",
            "--method",
            "mcmc",
            "--circuit",
            "coi.circ",
            "--observable",
            "XIXI",
            "--non-clifford",
            "10",
            "--targets",
            "0.999",
            "--epsilon",
            "0.0001",
            "--max-steps",
            "3",
            "--restarts",
            "0",
            "--out",
            "mc",
        ],
    );
    assert_eq!(code, 3, "{out}");
}
