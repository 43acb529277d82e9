//! Training-set layouts: which circuits are generated and in which basis
//! each one is measured.

use rand::seq::{index::sample, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::rng_from_seed;
use crate::sim::Basis;
use crate::training::target_grid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardLayout {
    /// Measurement basis of each training circuit.
    pub bases: Vec<Basis>,
    pub note: Option<String>,
}

/// Split `n_t` standard circuits between the X and Y bases.
///
/// `n_t = 2` measures both circuits in one basis, alternating with the
/// instance parity (even: X). Otherwise half go to each basis at random; an
/// odd extra circuit gets a random basis and a note.
pub fn layout_standard(n_t: usize, instance: usize, seed: u64) -> StandardLayout {
    if n_t == 2 {
        let b = if instance.is_multiple_of(2) {
            Basis::X
        } else {
            Basis::Y
        };
        return StandardLayout {
            bases: vec![b, b],
            note: None,
        };
    }
    let mut rng = rng_from_seed(seed);
    let half = n_t / 2;
    let mut bases: Vec<Basis> = std::iter::repeat_n(Basis::X, half)
        .chain(std::iter::repeat_n(Basis::Y, half))
        .collect();
    let mut note = None;
    if n_t % 2 == 1 {
        let extra = if rng.random_bool(0.5) {
            Basis::X
        } else {
            Basis::Y
        };
        bases.push(extra);
        note = Some(format!(
            "odd n_t={n_t}: extra circuit measured in {extra:?}"
        ));
    }
    bases.shuffle(&mut rng);
    StandardLayout { bases, note }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficientLayout {
    /// `(observable index, target value)` per training circuit.
    pub chains: Vec<(usize, f64)>,
    pub note: Option<String>,
}

/// Per-observable MCMC targets for `n_t` circuits over `m` observables.
///
/// `n_t ≥ 2m` and divisible by `m`: every observable gets the
/// `n_t/m`-point grid. `n_t < 2m`: `n_t/2` random observables get
/// `{−0.5, 0.5}`. Anything else is rounded down to the nearest valid layout.
pub fn layout_efficient(n_t: usize, m: usize, seed: u64) -> EfficientLayout {
    let (used, note) = if n_t >= 2 * m {
        let used = n_t - n_t % m;
        let note = (used != n_t)
            .then(|| format!("n_t={n_t} is not a multiple of {m}; using {used} circuits"));
        (used, note)
    } else {
        let used = n_t - n_t % 2;
        let note = (used != n_t).then(|| format!("odd n_t={n_t}; using {used} circuits"));
        (used, note)
    };
    let chains = if used >= 2 * m {
        let grid = target_grid(used / m).expect("at least two points");
        (0..m)
            .flat_map(|j| grid.iter().map(move |&y| (j, y)))
            .collect()
    } else {
        let mut rng = rng_from_seed(seed);
        let mut chosen = sample(&mut rng, m, used / 2).into_vec();
        chosen.sort_unstable();
        chosen
            .into_iter()
            .flat_map(|j| [(j, -0.5), (j, 0.5)])
            .collect()
    };
    EfficientLayout { chains, note }
}
