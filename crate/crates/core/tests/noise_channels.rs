//! Random surrogate models stay physical; checked with a Choi matrix built
//! directly from the Pauli expansion.

use cdr_forge::noise::{
    build_random_model, ring_topology, validate_cptp, NoiseModel, ProcessMatrix, SurrogateFamily,
    CPTP_TOLERANCE,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn pauli_string(index: usize, n: usize) -> DMatrix<Complex64> {
    let (o, z, i) = (
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 1.0),
    );
    let single = [
        DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ];
    // The first qubit is the most significant base-4 digit.
    (0..n).fold(DMatrix::from_element(1, 1, o), |acc, k| {
        acc.kronecker(&single[(index >> (2 * (n - 1 - k))) & 3])
    })
}

/// `J = (1/d) Σ R_ij P_jᵀ ⊗ P_i`; the channel is CP iff `J ⪰ 0`.
fn min_choi_eigenvalue(pm: &ProcessMatrix) -> f64 {
    let n = pm.num_qubits();
    let d = 1usize << n;
    let r = pm.ptm();
    let mut j = DMatrix::<Complex64>::zeros(d * d, d * d);
    for a in 0..d * d {
        for b in 0..d * d {
            if r[(a, b)] != 0.0 {
                let term = pauli_string(b, n)
                    .transpose()
                    .kronecker(&pauli_string(a, n));
                j += term * Complex64::new(r[(a, b)] / d as f64, 0.0);
            }
        }
    }
    j.symmetric_eigen().eigenvalues.min()
}

fn channels(model: &NoiseModel) -> Vec<ProcessMatrix> {
    model
        .one_qubit_channels()
        .map(|(_, c)| c.clone())
        .chain(model.two_qubit_channels().map(|(_, c)| c.clone()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_models_are_cptp(
        seed in any::<u64>(),
        lo in 0.0f64..1.0,
        width in 0.0f64..1.0,
        dep1 in 0.0f64..1.0,
        dep2 in 0.0f64..1.0,
        ad in 0.0f64..1.0,
        excited in 0.0f64..1.0,
    ) {
        let hi = (lo + width).min(1.0);
        let family = SurrogateFamily {
            depolarizing_1q: dep1,
            depolarizing_2q: dep2,
            amplitude_damping: ad,
            prep_excited: excited,
        };
        let model = build_random_model(3, &ring_topology(3), &family, (lo, hi), seed).unwrap();
        for ch in channels(&model) {
            let diag = validate_cptp(&ch, CPTP_TOLERANCE);
            prop_assert!(diag.passed);
            prop_assert!(diag.trace_residual <= 1e-10);
            prop_assert!(diag.min_choi_eigenvalue >= -1e-8);
            prop_assert!(min_choi_eigenvalue(&ch) >= -1e-8);
        }
        for (q, rho) in model.initial_state().iter().enumerate() {
            prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(rho[(1, 1)].re >= -1e-12 && rho[(0, 0)].re >= -1e-12, "qubit {}", q);
        }
        for &p in &model.mixing().qubits {
            prop_assert!(p >= lo && p <= hi);
        }
    }
}

#[test]
fn oracle_detects_non_cp_map() {
    // Transpose map: positive but not completely positive.
    let mut r = DMatrix::<f64>::identity(4, 4);
    r[(2, 2)] = -1.0;
    let t = ProcessMatrix::new(1, r).unwrap();
    assert!(min_choi_eigenvalue(&t) < -0.5);
    assert!(!validate_cptp(&t, CPTP_TOLERANCE).passed);
}
