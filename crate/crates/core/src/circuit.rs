//! Native-gate circuits, Pauli observables and the circuit text format.
//!
//! The gate set is closed: `X`, `SX`, `RZ(θ)`, `CNOT` and `I`. Qubit `q`
//! corresponds to bit `q` of a computational-basis index.
//!
//! Text format:
//!
//! ```text
//! qubits 2
//! # comment
//! SX 0
//! RZ 1 7.85398163397448279e-1
//! CNOT 0 1
//! ```

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default tolerance (radians) used to classify an `RZ` angle as Clifford.
pub const CLIFFORD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("gate {index}: qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange {
        index: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("gate {index}: CNOT control and target are both {qubit}")]
    SameControlTarget { index: usize, qubit: usize },
    #[error("gate {index}: non-finite rotation angle")]
    NonFiniteAngle { index: usize },
    #[error("circuit must act on at least one qubit")]
    NoQubits,
    #[error("invalid Pauli string: {0}")]
    InvalidPauli(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    X,
    SX,
    RZ,
    CNOT,
    I,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::SX => "SX",
            GateKind::RZ => "RZ",
            GateKind::CNOT => "CNOT",
            GateKind::I => "I",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "X" => Ok(GateKind::X),
            "SX" => Ok(GateKind::SX),
            "RZ" => Ok(GateKind::RZ),
            "CNOT" => Ok(GateKind::CNOT),
            "I" => Ok(GateKind::I),
            other => Err(format!("unknown gate `{other}`")),
        }
    }
}

/// A native gate. The enum shape makes `control` exist only for `CNOT`
/// and `angle` only for `RZ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X(usize),
    SX(usize),
    I(usize),
    RZ { qubit: usize, angle: f64 },
    CNOT { control: usize, target: usize },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X(_) => GateKind::X,
            Gate::SX(_) => GateKind::SX,
            Gate::I(_) => GateKind::I,
            Gate::RZ { .. } => GateKind::RZ,
            Gate::CNOT { .. } => GateKind::CNOT,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::X(q) | Gate::SX(q) | Gate::I(q) => q,
            Gate::RZ { qubit, .. } => qubit,
            Gate::CNOT { target, .. } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::CNOT { control, .. } => Some(control),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::RZ { angle, .. } => Some(angle),
            _ => None,
        }
    }

    /// Same gate with qubit labels passed through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::X(q) => Gate::X(map(q)),
            Gate::SX(q) => Gate::SX(map(q)),
            Gate::I(q) => Gate::I(map(q)),
            Gate::RZ { qubit, angle } => Gate::RZ {
                qubit: map(qubit),
                angle,
            },
            Gate::CNOT { control, target } => Gate::CNOT {
                control: map(control),
                target: map(target),
            },
        }
    }

    pub fn is_clifford(&self, tol: f64) -> bool {
        match *self {
            Gate::RZ { angle, .. } => clifford_angle_distance(angle) <= tol,
            _ => true,
        }
    }

    fn validate(&self, index: usize, num_qubits: usize) -> Result<(), CircuitError> {
        let check = |qubit: usize| {
            if qubit >= num_qubits {
                Err(CircuitError::QubitOutOfRange {
                    index,
                    qubit,
                    num_qubits,
                })
            } else {
                Ok(())
            }
        };
        check(self.target())?;
        if let Some(control) = self.control() {
            check(control)?;
            if control == self.target() {
                return Err(CircuitError::SameControlTarget {
                    index,
                    qubit: control,
                });
            }
        }
        if let Some(angle) = self.angle() {
            if !angle.is_finite() {
                return Err(CircuitError::NonFiniteAngle { index });
            }
        }
        Ok(())
    }
}

/// Distance from `theta` to the nearest multiple of π/2, modulo 2π.
pub fn clifford_angle_distance(theta: f64) -> f64 {
    let r = theta.rem_euclid(FRAC_PI_2);
    r.min(FRAC_PI_2 - r)
}

/// `true` for X, SX, CNOT and I; for RZ, whether the angle is within `tol`
/// of a multiple of π/2.
pub fn is_clifford(gate: &Gate, tol: f64) -> bool {
    gate.is_clifford(tol)
}

/// Index `k ∈ 0..4` of the Clifford rotation `RZ(kπ/2)` nearest to `theta`.
pub fn nearest_clifford_index(theta: f64) -> u8 {
    ((theta / FRAC_PI_2).round().rem_euclid(4.0)) as u8
}

/// Angle `kπ/2` of the `k`-th Clifford `RZ`.
pub fn clifford_angle(k: u8) -> f64 {
    f64::from(k) * FRAC_PI_2
}

/// Frobenius distance between `RZ(θ)` and `RZ(kπ/2)` after fixing the global
/// phase of each so that the upper-left entry is 1:
/// `‖diag(1, e^{iθ}) − diag(1, e^{ikπ/2})‖_F = 2|sin((θ − kπ/2)/2)|`.
pub fn rz_distance(theta: f64, k: u8) -> f64 {
    2.0 * ((theta - clifford_angle(k)) / 2.0).sin().abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        for (index, gate) in gates.iter().enumerate() {
            gate.validate(index, num_qubits)?;
        }
        Ok(Self { num_qubits, gates })
    }

    pub fn empty(num_qubits: usize) -> Result<Self, CircuitError> {
        Self::new(num_qubits, Vec::new())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.gates.len(), self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Replace the angle of the `RZ` gate at `index`. Panics if the gate is
    /// not an `RZ`.
    pub(crate) fn set_rz_angle(&mut self, index: usize, new_angle: f64) {
        match &mut self.gates[index] {
            Gate::RZ { angle, .. } => *angle = new_angle,
            other => panic!("gate {index} is {other:?}, not RZ"),
        }
    }

    /// Positions of `RZ` gates that are not Clifford at the default tolerance.
    pub fn non_clifford_positions(&self) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_clifford(CLIFFORD_TOLERANCE))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn non_clifford_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| !g.is_clifford(CLIFFORD_TOLERANCE))
            .count()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    /// Ordered `(control, target)` pairs used by CNOT gates.
    pub fn cnot_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<_> = self
            .gates
            .iter()
            .filter_map(|g| match *g {
                Gate::CNOT { control, target } => Some((control, target)),
                _ => None,
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Result<Circuit, CircuitError> {
        Circuit::new(
            self.num_qubits,
            self.gates.iter().map(|g| g.relabel(&map)).collect(),
        )
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_circuit(self))
    }
}

impl FromStr for Circuit {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_circuit(s)
    }
}

fn format_angle(angle: f64) -> String {
    // 17 significant digits round-trip every f64.
    format!("{angle:.16e}")
}

/// Canonical text form: header line, one gate per line, trailing newline.
pub fn serialize_circuit(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.num_qubits);
    for gate in &circuit.gates {
        let line = match *gate {
            Gate::X(q) => format!("X {q}"),
            Gate::SX(q) => format!("SX {q}"),
            Gate::I(q) => format!("I {q}"),
            Gate::RZ { qubit, angle } => format!("RZ {qubit} {}", format_angle(angle)),
            Gate::CNOT { control, target } => format!("CNOT {control} {target}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut num_qubits = None;
    let mut gates = Vec::new();
    let mut gate_lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| CircuitError::Parse {
            line: line_no,
            message,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let qubit_arg = |i: usize| -> Result<usize, CircuitError> {
            let tok = tokens
                .get(i)
                .ok_or_else(|| err(format!("missing argument {i}")))?;
            tok.parse::<usize>()
                .map_err(|_| err(format!("invalid qubit index `{tok}`")))
        };
        let arity = |n: usize| -> Result<(), CircuitError> {
            if tokens.len() != n + 1 {
                Err(err(format!(
                    "`{}` expects {n} argument(s), found {}",
                    tokens[0],
                    tokens.len() - 1
                )))
            } else {
                Ok(())
            }
        };

        if num_qubits.is_none() {
            if tokens[0] != "qubits" {
                return Err(err("expected header `qubits Q`".into()));
            }
            arity(1)?;
            let q = qubit_arg(1)?;
            if q == 0 {
                return Err(err("qubit count must be positive".into()));
            }
            num_qubits = Some(q);
            continue;
        }

        let kind: GateKind = tokens[0].parse().map_err(err)?;
        let gate = match kind {
            GateKind::X => {
                arity(1)?;
                Gate::X(qubit_arg(1)?)
            }
            GateKind::SX => {
                arity(1)?;
                Gate::SX(qubit_arg(1)?)
            }
            GateKind::I => {
                arity(1)?;
                Gate::I(qubit_arg(1)?)
            }
            GateKind::RZ => {
                arity(2)?;
                let qubit = qubit_arg(1)?;
                let angle: f64 = tokens[2]
                    .parse()
                    .map_err(|_| err(format!("invalid angle `{}`", tokens[2])))?;
                if !angle.is_finite() {
                    return Err(err(format!("non-finite angle `{}`", tokens[2])));
                }
                Gate::RZ { qubit, angle }
            }
            GateKind::CNOT => {
                arity(2)?;
                Gate::CNOT {
                    control: qubit_arg(1)?,
                    target: qubit_arg(2)?,
                }
            }
        };
        gates.push(gate);
        gate_lines.push(line_no);
    }

    let num_qubits = num_qubits.ok_or(CircuitError::Parse {
        line: 1,
        message: "missing header `qubits Q`".into(),
    })?;
    for (i, gate) in gates.iter().enumerate() {
        if let Err(e) = gate.validate(i, num_qubits) {
            return Err(match e {
                CircuitError::QubitOutOfRange { qubit, .. } => CircuitError::Parse {
                    line: gate_lines[i],
                    message: format!("qubit {qubit} out of range for {num_qubits} qubits"),
                },
                other => CircuitError::Parse {
                    line: gate_lines[i],
                    message: other.to_string(),
                },
            });
        }
    }
    Ok(Circuit { num_qubits, gates })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// Position in the ordered basis (I, X, Y, Z).
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Tensor product of one Pauli letter per qubit.
///
/// The dense string form lists qubit 0 first, e.g. `XIIXII`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliObservable {
    paulis: Vec<Pauli>,
}

impl PauliObservable {
    pub fn new(paulis: Vec<Pauli>) -> Result<Self, CircuitError> {
        if paulis.is_empty() {
            return Err(CircuitError::NoQubits);
        }
        Ok(Self { paulis })
    }

    /// Identity everywhere except the listed `(qubit, letter)` pairs.
    pub fn from_sparse(num_qubits: usize, terms: &[(usize, Pauli)]) -> Result<Self, CircuitError> {
        let mut paulis = vec![Pauli::I; num_qubits];
        for &(q, p) in terms {
            if q >= num_qubits {
                return Err(CircuitError::InvalidPauli(format!(
                    "qubit {q} out of range for {num_qubits} qubits"
                )));
            }
            paulis[q] = p;
        }
        Self::new(paulis)
    }

    pub fn num_qubits(&self) -> usize {
        self.paulis.len()
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.paulis
    }

    pub fn is_identity(&self) -> bool {
        self.paulis.iter().all(|&p| p == Pauli::I)
    }

    /// Bit masks `(x_or_y, z_or_y, y_count)` describing the action on
    /// basis states: `P|b⟩ = i^{y} (−1)^{|b ∧ zy|} |b ⊕ xy⟩`.
    pub(crate) fn masks(&self) -> (usize, usize, u32) {
        let mut flip = 0usize;
        let mut phase = 0usize;
        let mut ys = 0u32;
        for (q, p) in self.paulis.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    phase |= 1 << q;
                    ys += 1;
                }
                Pauli::Z => phase |= 1 << q,
            }
        }
        (flip, phase, ys)
    }

    /// The single non-identity letter if the observable uses only one.
    pub fn uniform_letter(&self) -> Option<Pauli> {
        let mut letter = None;
        for &p in &self.paulis {
            if p == Pauli::I {
                continue;
            }
            match letter {
                None => letter = Some(p),
                Some(l) if l == p => {}
                Some(_) => return None,
            }
        }
        letter
    }

    pub fn support(&self) -> Vec<usize> {
        self.paulis
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(q, _)| q)
            .collect()
    }

    /// Compact label such as `X0X3`.
    pub fn label(&self) -> String {
        if self.is_identity() {
            return "I".into();
        }
        self.paulis
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(q, p)| format!("{}{q}", p.letter()))
            .collect()
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.paulis {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliObservable {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let paulis = s
            .trim()
            .chars()
            .map(|c| Pauli::from_letter(c).ok_or_else(|| CircuitError::InvalidPauli(s.into())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(paulis)
    }
}

/// Wrap an angle into `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    // Explicit 2x2 Frobenius norm of e^{iθ/2}RZ(θ) − e^{ikπ/4}RZ(kπ/2).
    fn rz_distance_matrix(theta: f64, k: u8) -> f64 {
        let rz = |t: f64| {
            [
                Complex64::from_polar(1.0, -t / 2.0),
                Complex64::from_polar(1.0, t / 2.0),
            ]
        };
        let a = rz(theta).map(|z| z * Complex64::from_polar(1.0, theta / 2.0));
        let kk = f64::from(k);
        let b = rz(kk * FRAC_PI_2).map(|z| z * Complex64::from_polar(1.0, kk * FRAC_PI_4));
        ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
    }

    #[test]
    fn clifford_predicate() {
        let rz = |angle| Gate::RZ { qubit: 0, angle };
        assert!(is_clifford(&rz(FRAC_PI_2), CLIFFORD_TOLERANCE));
        assert!(!is_clifford(&rz(0.3), CLIFFORD_TOLERANCE));
        assert!(is_clifford(
            &Gate::CNOT {
                control: 0,
                target: 1
            },
            CLIFFORD_TOLERANCE
        ));
        assert!(is_clifford(&Gate::SX(0), CLIFFORD_TOLERANCE));
        assert!(is_clifford(&rz(-3.0 * FRAC_PI_2), CLIFFORD_TOLERANCE));
        assert!(is_clifford(&rz(2.0 * PI + 1e-12), CLIFFORD_TOLERANCE));
        assert!(!is_clifford(&rz(FRAC_PI_2 + 1e-6), CLIFFORD_TOLERANCE));
    }

    #[test]
    fn rz_distance_examples() {
        assert!(rz_distance(FRAC_PI_2, 1).abs() < 1e-15);
        let d0 = rz_distance_matrix(FRAC_PI_4, 0);
        let d3 = rz_distance_matrix(FRAC_PI_4, 3);
        assert!((d0 - 0.765366864730180).abs() < 1e-12);
        assert!((d3 - 1.847759065022573).abs() < 1e-12);
        assert!((rz_distance(FRAC_PI_4, 0) - d0).abs() < 1e-12);
        assert!((rz_distance(FRAC_PI_4, 3) - d3).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn rz_distance_matches_matrix_norm(theta in -20.0f64..20.0, k in 0u8..4) {
            prop_assert!((rz_distance(theta, k) - rz_distance_matrix(theta, k)).abs() < 1e-12);
        }

        #[test]
        fn rz_distance_is_2pi_periodic(theta in -20.0f64..20.0, k in 0u8..4) {
            prop_assert!((rz_distance(theta + TAU, k) - rz_distance(theta, k)).abs() < 1e-12);
        }

        #[test]
        fn serialization_round_trips(angles in proptest::collection::vec(-10.0f64..10.0, 0..20)) {
            let mut gates = vec![Gate::SX(0), Gate::CNOT { control: 0, target: 2 }];
            for (i, a) in angles.iter().enumerate() {
                gates.push(Gate::RZ { qubit: i % 3, angle: *a });
                if i % 4 == 0 { gates.push(Gate::X(1)); }
            }
            let c = Circuit::new(3, gates).unwrap();
            let text = serialize_circuit(&c);
            let back = parse_circuit(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.non_clifford_count(), c.non_clifford_count());
            prop_assert_eq!(serialize_circuit(&back), text);
        }
    }

    #[test]
    fn non_clifford_count_matches_rz_predicate() {
        let c = Circuit::new(
            2,
            vec![
                Gate::RZ {
                    qubit: 0,
                    angle: 0.3,
                },
                Gate::RZ {
                    qubit: 1,
                    angle: PI,
                },
                Gate::SX(1),
                Gate::RZ {
                    qubit: 1,
                    angle: -1.2,
                },
            ],
        )
        .unwrap();
        assert_eq!(c.non_clifford_count(), 2);
        assert_eq!(c.non_clifford_positions(), vec![0, 3]);
    }

    #[test]
    fn parse_example() {
        let c = parse_circuit("qubits 2\nSX 0\nCNOT 0 1").unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(
            c.gates(),
            &[
                Gate::SX(0),
                Gate::CNOT {
                    control: 0,
                    target: 1
                }
            ]
        );
        let canonical = "qubits 2\nSX 0\nCNOT 0 1\n";
        assert_eq!(
            serialize_circuit(&parse_circuit(canonical).unwrap()),
            canonical
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_circuit("qubits 1\nRZ 0 abc").unwrap_err();
        assert!(
            matches!(err, CircuitError::Parse { line: 2, .. }),
            "{err:?}"
        );

        let err = parse_circuit("qubits 2\n# c\nX 0\nCNOT 0 2").unwrap_err();
        assert!(
            matches!(err, CircuitError::Parse { line: 4, .. }),
            "{err:?}"
        );

        let err = parse_circuit("X 0").unwrap_err();
        assert!(matches!(err, CircuitError::Parse { line: 1, .. }));

        assert!(parse_circuit("qubits 2\nCNOT 1 1").is_err());
        assert!(parse_circuit("qubits 2\nH 0").is_err());
        assert!(parse_circuit("qubits 2\nX 0 1").is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let c = parse_circuit("# header\n\nqubits 1 # one qubit\nX 0 # flip\n").unwrap();
        assert_eq!(c.gates(), &[Gate::X(0)]);
    }

    #[test]
    fn validation_rejects_out_of_range() {
        let err = Circuit::new(2, vec![Gate::X(2)]).unwrap_err();
        assert!(matches!(
            err,
            CircuitError::QubitOutOfRange { qubit: 2, .. }
        ));
    }

    #[test]
    fn pauli_labels() {
        let o: PauliObservable = "XIIXII".parse().unwrap();
        assert_eq!(o.label(), "X0X3");
        assert_eq!(o.uniform_letter(), Some(Pauli::X));
        assert_eq!(o.to_string(), "XIIXII");
        let mixed: PauliObservable = "XY".parse().unwrap();
        assert_eq!(mixed.uniform_letter(), None);
    }

    #[test]
    fn nearest_clifford() {
        assert_eq!(nearest_clifford_index(0.1), 0);
        assert_eq!(nearest_clifford_index(PI), 2);
        assert_eq!(nearest_clifford_index(-FRAC_PI_2), 3);
        assert_eq!(nearest_clifford_index(TAU - 0.1), 0);
    }
}
