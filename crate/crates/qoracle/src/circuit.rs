//! Circuit intermediate representation: an ordered gate list with the
//! structural operators (compose, dagger, controlled, power) used to
//! assemble search and estimation circuits algebraically, plus a QFT
//! builder.
//!
//! Qubit 0 is the most significant bit of a basis index throughout.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::Range;

use crate::error::{Error, Result};

/// A primitive gate. `Phase(θ)` maps |1⟩ to e^{iθ}|1⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Z,
    Phase(f64),
    Rx(f64),
    Ry(f64),
}

impl GateKind {
    /// Inverse gate: rotations negate their angle, the rest are involutions.
    pub fn inverse(self) -> Self {
        match self {
            GateKind::H | GateKind::X | GateKind::Z => self,
            GateKind::Phase(theta) => GateKind::Phase(-theta),
            GateKind::Rx(theta) => GateKind::Rx(-theta),
            GateKind::Ry(theta) => GateKind::Ry(-theta),
        }
    }

    fn label(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Phase(_) => "PHASE",
            GateKind::Rx(_) => "RX",
            GateKind::Ry(_) => "RY",
        }
    }
}

/// One gate application: a kind, a target qubit, and an arbitrary set of
/// control qubits. The gate acts only where every control reads 1.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    /// Sorted, deduplicated control indices.
    pub controls: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, target: usize) -> Self {
        GateOp {
            kind,
            target,
            controls: Vec::new(),
        }
    }

    pub fn with_controls(kind: GateKind, target: usize, controls: &[usize]) -> Self {
        let mut controls = controls.to_vec();
        controls.sort_unstable();
        controls.dedup();
        GateOp {
            kind,
            target,
            controls,
        }
    }

    pub fn inverse(&self) -> Self {
        GateOp {
            kind: self.kind.inverse(),
            target: self.target,
            controls: self.controls.clone(),
        }
    }

    pub(crate) fn uses_qubit(&self, qubit: usize) -> bool {
        self.target == qubit || self.controls.contains(&qubit)
    }

    pub(crate) fn validate(&self, num_qubits: usize) -> Result<()> {
        if let GateKind::Phase(theta) | GateKind::Rx(theta) | GateKind::Ry(theta) = self.kind {
            if !theta.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "rotation angle must be finite, got {theta}"
                )));
            }
        }
        if self.target >= num_qubits {
            return Err(Error::QubitOutOfRange {
                index: self.target,
                num_qubits,
            });
        }
        for &c in &self.controls {
            if c >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: c,
                    num_qubits,
                });
            }
            if c == self.target {
                return Err(Error::QubitCollision { index: c });
            }
        }
        Ok(())
    }
}

/// An ordered list of gates over a fixed-width register. Immutable once
/// built (the structural operators return new circuits), so values are
/// safe to share across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            ops: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Append a gate, validating its indices against the register width.
    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn h(&mut self, target: usize) -> Result<&mut Self> {
        self.push(GateOp::new(GateKind::H, target))
    }

    pub fn x(&mut self, target: usize) -> Result<&mut Self> {
        self.push(GateOp::new(GateKind::X, target))
    }

    pub fn z(&mut self, target: usize) -> Result<&mut Self> {
        self.push(GateOp::new(GateKind::Z, target))
    }

    pub fn phase(&mut self, theta: f64, target: usize) -> Result<&mut Self> {
        self.push(GateOp::new(GateKind::Phase(theta), target))
    }

    pub fn rx(&mut self, theta: f64, target: usize) -> Result<&mut Self> {
        self.push(GateOp::new(GateKind::Rx(theta), target))
    }

    pub fn ry(&mut self, theta: f64, target: usize) -> Result<&mut Self> {
        self.push(GateOp::new(GateKind::Ry(theta), target))
    }

    pub fn x_ctl(&mut self, target: usize, controls: &[usize]) -> Result<&mut Self> {
        self.push(GateOp::with_controls(GateKind::X, target, controls))
    }

    pub fn z_ctl(&mut self, target: usize, controls: &[usize]) -> Result<&mut Self> {
        self.push(GateOp::with_controls(GateKind::Z, target, controls))
    }

    pub fn phase_ctl(
        &mut self,
        theta: f64,
        target: usize,
        controls: &[usize],
    ) -> Result<&mut Self> {
        self.push(GateOp::with_controls(
            GateKind::Phase(theta),
            target,
            controls,
        ))
    }

    pub fn ry_ctl(&mut self, theta: f64, target: usize, controls: &[usize]) -> Result<&mut Self> {
        self.push(GateOp::with_controls(GateKind::Ry(theta), target, controls))
    }

    /// Sequential composition: `self` first, then `other`.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::RegisterMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        let mut ops = self.ops.clone();
        ops.extend(other.ops.iter().cloned());
        Ok(Circuit {
            num_qubits: self.num_qubits,
            ops,
        })
    }

    /// The inverse circuit: reversed op order with every gate inverted.
    pub fn dagger(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// Add `control` to every gate's control set. The result acts as the
    /// identity on the control-0 subspace. Errors if the circuit already
    /// uses that qubit.
    pub fn controlled(&self, control: usize) -> Result<Circuit> {
        if self.ops.iter().any(|op| op.uses_qubit(control)) {
            return Err(Error::QubitCollision { index: control });
        }
        let ops = self
            .ops
            .iter()
            .map(|op| {
                let mut controls = op.controls.clone();
                controls.push(control);
                controls.sort_unstable();
                GateOp {
                    kind: op.kind,
                    target: op.target,
                    controls,
                }
            })
            .collect();
        Ok(Circuit {
            num_qubits: self.num_qubits.max(control + 1),
            ops,
        })
    }

    /// Eager repetition; `power(0)` is the empty circuit.
    pub fn power(&self, exponent: usize) -> Circuit {
        let mut ops = Vec::with_capacity(self.ops.len() * exponent);
        for _ in 0..exponent {
            ops.extend(self.ops.iter().cloned());
        }
        Circuit {
            num_qubits: self.num_qubits,
            ops,
        }
    }

    /// Same gates over a wider register.
    pub fn padded(&self, num_qubits: usize) -> Result<Circuit> {
        if num_qubits < self.num_qubits {
            return Err(Error::RegisterMismatch {
                left: self.num_qubits,
                right: num_qubits,
            });
        }
        Ok(Circuit {
            num_qubits,
            ops: self.ops.clone(),
        })
    }

    /// Shift every qubit index up by `offset`, growing the register.
    pub fn shifted(&self, offset: usize) -> Circuit {
        let ops = self
            .ops
            .iter()
            .map(|op| GateOp {
                kind: op.kind,
                target: op.target + offset,
                controls: op.controls.iter().map(|&c| c + offset).collect(),
            })
            .collect();
        Circuit {
            num_qubits: self.num_qubits + offset,
            ops,
        }
    }

    /// Text dump, one op per line: `GATE(θ?) target [controls...]`.
    /// Multi-controlled gates count as single ops here; they are executed
    /// natively by the simulator, not decomposed.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            match op.kind {
                GateKind::Phase(theta) | GateKind::Rx(theta) | GateKind::Ry(theta) => {
                    write!(out, "{}({:?}) {}", op.kind.label(), theta, op.target).unwrap();
                }
                _ => write!(out, "{} {}", op.kind.label(), op.target).unwrap(),
            }
            if !op.controls.is_empty() {
                let list: Vec<String> = op.controls.iter().map(|c| c.to_string()).collect();
                write!(out, " [{}]", list.join(" ")).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// H on every qubit of `range`, over a `num_qubits`-wide register.
pub fn hadamard_layer(range: Range<usize>, num_qubits: usize) -> Result<Circuit> {
    let mut c = Circuit::new(num_qubits);
    for q in range {
        c.h(q)?;
    }
    Ok(c)
}

/// Quantum Fourier transform over `num_qubits` qubits, mapping
/// |k⟩ ↦ 2^{-m/2} Σ_j e^{2πi·kj/2^m}|j⟩ with qubit 0 as the most
/// significant bit. The qubit-reversal swaps are included, built from
/// three controlled-X gates each. `inverse` gives the adjoint.
pub fn qft(num_qubits: usize, inverse: bool) -> Circuit {
    let m = num_qubits;
    let mut c = Circuit::new(m);
    for j in 0..m {
        c.h(j).expect("index in range");
        for k in (j + 1)..m {
            let theta = PI / (1u64 << (k - j)) as f64;
            c.phase_ctl(theta, j, &[k]).expect("index in range");
        }
    }
    for i in 0..m / 2 {
        let (a, b) = (i, m - 1 - i);
        c.x_ctl(b, &[a]).expect("index in range");
        c.x_ctl(a, &[b]).expect("index in range");
        c.x_ctl(b, &[a]).expect("index in range");
    }
    if inverse {
        c.dagger()
    } else {
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_circuit() -> Circuit {
        let mut c = Circuit::new(3);
        c.h(0).unwrap();
        c.phase_ctl(0.3, 1, &[0]).unwrap();
        c.ry(1.1, 2).unwrap();
        c.x_ctl(2, &[0, 1]).unwrap();
        c
    }

    #[test]
    fn compose_with_empty_is_identity_element() {
        let c = sample_circuit();
        let empty = Circuit::new(3);
        assert_eq!(c.compose(&empty).unwrap(), c);
        assert_eq!(empty.compose(&c).unwrap(), c);
    }

    #[test]
    fn compose_is_associative() {
        let a = sample_circuit();
        let mut b = Circuit::new(3);
        b.z(0).unwrap();
        let c = qft(3, false);
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn compose_rejects_register_mismatch() {
        let c = sample_circuit();
        assert!(matches!(
            c.compose(&Circuit::new(2)),
            Err(Error::RegisterMismatch { .. })
        ));
    }

    #[test]
    fn dagger_is_an_involution() {
        let c = sample_circuit();
        assert_eq!(c.dagger().dagger(), c);
    }

    #[test]
    fn dagger_negates_rotation_angles() {
        let mut c = Circuit::new(1);
        c.phase(0.7, 0).unwrap();
        let inv = c.dagger();
        assert_eq!(inv.ops()[0].kind, GateKind::Phase(-0.7));
    }

    #[test]
    fn controlled_distributes_over_compose() {
        let a = sample_circuit();
        let mut b = Circuit::new(3);
        b.z(1).unwrap();
        let lhs = a.compose(&b).unwrap().controlled(4).unwrap();
        let rhs = a
            .controlled(4)
            .unwrap()
            .compose(&b.controlled(4).unwrap().padded(5).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn controlled_rejects_used_qubit() {
        let c = sample_circuit();
        assert!(matches!(
            c.controlled(1),
            Err(Error::QubitCollision { index: 1 })
        ));
    }

    #[test]
    fn power_repeats_ops() {
        let c = sample_circuit();
        assert!(c.power(0).is_empty());
        assert_eq!(c.power(1), c);
        assert_eq!(c.power(3).len(), 3 * c.len());
    }

    #[test]
    fn push_validates_indices() {
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.h(2),
            Err(Error::QubitOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            c.x_ctl(1, &[1]),
            Err(Error::QubitCollision { index: 1 })
        ));
        assert!(c.phase(f64::NAN, 0).is_err());
        assert!(c.ry(f64::INFINITY, 0).is_err());
    }

    #[test]
    fn single_qubit_qft_is_a_hadamard() {
        let c = qft(1, false);
        assert_eq!(c.ops(), &[GateOp::new(GateKind::H, 0)]);
    }

    fn random_state(num_qubits: usize, seed: u64) -> crate::sim::StateVector {
        use num_complex::Complex64;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut amps: Vec<Complex64> = (0..1usize << num_qubits)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        crate::sim::StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn dagger_inverts_the_circuit_on_states() {
        let c = sample_circuit();
        let round_trip = c.compose(&c.dagger()).unwrap();
        let state = random_state(3, 17);
        let mut evolved = state.clone();
        evolved.apply_circuit(&round_trip).unwrap();
        assert!(state.max_abs_diff(&evolved) < 1e-10);
    }

    #[test]
    fn double_x_acts_as_identity() {
        let mut c = Circuit::new(2);
        c.x(0).unwrap();
        c.x(0).unwrap();
        let state = random_state(2, 3);
        let mut evolved = state.clone();
        evolved.apply_circuit(&c).unwrap();
        assert!(state.max_abs_diff(&evolved) < 1e-15);
    }

    #[test]
    fn controlled_x_is_a_cnot() {
        let mut x = Circuit::new(2);
        x.x(1).unwrap();
        let cnot = x.controlled(0).unwrap();
        assert_eq!(cnot.ops(), &[GateOp::with_controls(GateKind::X, 1, &[0])]);
    }

    #[test]
    fn controlled_circuit_acts_only_when_the_control_is_set() {
        use num_complex::Complex64;
        // Random two-qubit block on qubits 1..3, controlled on qubit 0.
        let mut g = Circuit::new(3);
        g.h(1).unwrap();
        g.ry(0.83, 2).unwrap();
        g.phase_ctl(1.2, 2, &[1]).unwrap();
        g.x(1).unwrap();
        let controlled = g.controlled(0).unwrap();

        let block = random_state(2, 29);
        let dim = block.dim();

        // |0⟩ ⊗ ψ stays put.
        let mut amps = vec![Complex64::ZERO; 2 * dim];
        amps[..dim].copy_from_slice(block.amplitudes());
        let mut off = crate::sim::StateVector::from_amplitudes(amps.clone()).unwrap();
        off.apply_circuit(&controlled).unwrap();
        for i in 0..dim {
            assert!((off.amplitude(i) - block.amplitudes()[i]).norm() < 1e-12);
            assert_eq!(off.amplitude(dim + i), Complex64::ZERO);
        }

        // |1⟩ ⊗ ψ gets the bare block.
        let mut expected = block.clone();
        let mut bare = Circuit::new(2);
        for op in g.ops() {
            bare.push(GateOp {
                kind: op.kind,
                target: op.target - 1,
                controls: op.controls.iter().map(|c| c - 1).collect(),
            })
            .unwrap();
        }
        expected.apply_circuit(&bare).unwrap();

        amps.rotate_right(dim);
        let mut on = crate::sim::StateVector::from_amplitudes(amps).unwrap();
        on.apply_circuit(&controlled).unwrap();
        for i in 0..dim {
            assert!((on.amplitude(dim + i) - expected.amplitudes()[i]).norm() < 1e-12);
            assert_eq!(on.amplitude(i), Complex64::ZERO);
        }
    }

    #[test]
    fn qft_matches_the_fourier_matrix() {
        use num_complex::Complex64;
        // Column k of the transform must be 2^{-m/2}·e^{2πi·kj/2^m} over j.
        for m in 1..=5usize {
            let dim = 1usize << m;
            let circuit = qft(m, false);
            let scale = 1.0 / (dim as f64).sqrt();
            for k in 0..dim {
                let mut amps = vec![Complex64::ZERO; dim];
                amps[k] = Complex64::ONE;
                let mut state = crate::sim::StateVector::from_amplitudes(amps).unwrap();
                state.apply_circuit(&circuit).unwrap();
                for j in 0..dim {
                    let angle = std::f64::consts::TAU * (k * j) as f64 / dim as f64;
                    let expected = scale * Complex64::from_polar(1.0, angle);
                    assert!(
                        (state.amplitude(j) - expected).norm() < 1e-10,
                        "m={m} k={k} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_qft_undoes_qft() {
        for m in 1..=6usize {
            let round_trip = qft(m, false).compose(&qft(m, true)).unwrap();
            let state = random_state(m, m as u64);
            let mut evolved = state.clone();
            evolved.apply_circuit(&round_trip).unwrap();
            assert!(state.max_abs_diff(&evolved) < 1e-10, "m = {m}");
        }
    }

    #[test]
    fn text_dump_format() {
        let c = sample_circuit();
        let text = c.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "H 0");
        assert_eq!(lines[1], "PHASE(0.3) 1 [0]");
        assert_eq!(lines[2], "RY(1.1) 2");
        assert_eq!(lines[3], "X 2 [0 1]");
    }
}
