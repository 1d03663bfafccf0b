//! Exact dense statevector engine: gate application over bit-masked index
//! pairs, exact probability extraction, and seeded shot sampling.
//!
//! Conventions, used everywhere downstream:
//! - qubit 0 is the most significant bit of a basis index, so the
//!   bitstring of an index reads left to right as qubit 0, 1, ...;
//! - gates with control sets are executed natively via a control mask,
//!   never decomposed;
//! - global phase is not normalized away.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind, GateOp};
use crate::error::{Error, Result};

/// Hard cap on register width; 2^26 amplitudes is 1 GiB of state.
pub const MAX_QUBITS: usize = 26;

/// Default probability threshold for [`StateVector::nonzero_support`],
/// well above accumulated double-precision error for circuits up to
/// ~10^4 gates.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// Index of a computational-basis state. Qubit 0 is the most significant
/// bit, so `BasisIndex::from_bitstring("01")` has qubit 0 clear and
/// qubit 1 set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(pub usize);

impl BasisIndex {
    pub fn bitstring(self, num_qubits: usize) -> String {
        format!("{:0width$b}", self.0, width = num_qubits)
    }

    pub fn from_bitstring(s: &str) -> Result<Self> {
        let value = usize::from_str_radix(s, 2)
            .map_err(|e| Error::parse(0, format!("invalid bitstring {s:?}: {e}")))?;
        Ok(BasisIndex(value))
    }

    /// Value of one qubit within an `num_qubits`-wide index.
    pub fn bit(self, num_qubits: usize, qubit: usize) -> bool {
        (self.0 >> (num_qubits - 1 - qubit)) & 1 == 1
    }
}

/// A basis state together with its measurement probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub basis: BasisIndex,
    pub probability: f64,
}

/// Shot counts keyed by basis index.
pub type Histogram = BTreeMap<BasisIndex, u64>;

/// Dense array of 2^n complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct StateDump {
    num_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl StateVector {
    /// The all-zeros state |0...0⟩.
    pub fn init_zero(num_qubits: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&num_qubits) {
            return Err(Error::ResourceLimit {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex64::ZERO; 1 << num_qubits];
        amps[0] = Complex64::ONE;
        Ok(StateVector { num_qubits, amps })
    }

    /// Build from explicit amplitudes; the vector must have length 2^n for
    /// some n in range and unit norm within 1e-9.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let num_qubits = amps.len().trailing_zeros() as usize;
        if amps.len() < 2 || amps.len() != 1 << num_qubits || num_qubits > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "amplitude vector of length {} is not 2^n for supported n",
                amps.len()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "amplitudes have norm² {norm}, expected 1"
            )));
        }
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amps[basis]
    }

    pub fn probability(&self, basis: usize) -> f64 {
        self.amps[basis].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Apply one gate in place. Norm is preserved up to rounding.
    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        let n = self.num_qubits;
        let t_mask = 1usize << (n - 1 - op.target);
        let mut c_mask = 0usize;
        for &c in &op.controls {
            c_mask |= 1 << (n - 1 - c);
        }
        match op.kind {
            GateKind::X => self.map_pairs(t_mask, c_mask, |a0, a1| (a1, a0)),
            GateKind::H => self.map_pairs(t_mask, c_mask, |a0, a1| {
                (FRAC_1_SQRT_2 * (a0 + a1), FRAC_1_SQRT_2 * (a0 - a1))
            }),
            GateKind::Rx(theta) => {
                let c = (theta / 2.0).cos();
                let ns = Complex64::new(0.0, -(theta / 2.0).sin());
                self.map_pairs(t_mask, c_mask, |a0, a1| {
                    (c * a0 + ns * a1, ns * a0 + c * a1)
                });
            }
            GateKind::Ry(theta) => {
                let c = (theta / 2.0).cos();
                let s = (theta / 2.0).sin();
                self.map_pairs(t_mask, c_mask, |a0, a1| (c * a0 - s * a1, s * a0 + c * a1));
            }
            GateKind::Z => self.map_ones(t_mask, c_mask, |a| -a),
            GateKind::Phase(theta) => {
                let phase = Complex64::from_polar(1.0, theta);
                self.map_ones(t_mask, c_mask, |a| phase * a);
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::RegisterMismatch {
                left: self.num_qubits,
                right: circuit.num_qubits(),
            });
        }
        for op in circuit.ops() {
            self.apply_gate(op)?;
        }
        Ok(())
    }

    fn map_pairs(
        &mut self,
        t_mask: usize,
        c_mask: usize,
        f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64),
    ) {
        for i in 0..self.amps.len() {
            if i & t_mask == 0 && i & c_mask == c_mask {
                let j = i | t_mask;
                let (b0, b1) = f(self.amps[i], self.amps[j]);
                self.amps[i] = b0;
                self.amps[j] = b1;
            }
        }
    }

    fn map_ones(&mut self, t_mask: usize, c_mask: usize, f: impl Fn(Complex64) -> Complex64) {
        let full = t_mask | c_mask;
        for i in 0..self.amps.len() {
            if i & full == full {
                self.amps[i] = f(self.amps[i]);
            }
        }
    }

    /// Probability of the event selected by `predicate`, summed in basis
    /// order.
    pub fn probability_of(&self, predicate: impl Fn(usize) -> bool) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| predicate(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Seeded shot sampling. The generator is the ChaCha8 stream cipher
    /// (`rand_chacha`), so a fixed (state, shots, seed) triple always
    /// produces the same histogram.
    pub fn sample(&self, shots: u64, seed: u64) -> Histogram {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hist = Histogram::new();
        for _ in 0..shots {
            let x: f64 = rng.random::<f64>() * total;
            let idx = cdf.partition_point(|&c| c <= x).min(self.amps.len() - 1);
            *hist.entry(BasisIndex(idx)).or_insert(0) += 1;
        }
        hist
    }

    /// Basis states with probability above `threshold`.
    pub fn nonzero_support(&self, threshold: f64) -> Vec<BasisIndex> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > threshold)
            .map(|(i, _)| BasisIndex(i))
            .collect()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> + '_ {
        self.amps.iter().enumerate().map(|(i, a)| Outcome {
            basis: BasisIndex(i),
            probability: a.norm_sqr(),
        })
    }

    /// Largest elementwise amplitude difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.num_qubits, other.num_qubits);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise difference after aligning `other`'s global
    /// phase to this state's largest-magnitude amplitude.
    pub fn max_abs_diff_up_to_global_phase(&self, other: &StateVector) -> f64 {
        assert_eq!(self.num_qubits, other.num_qubits);
        let pivot = (0..self.amps.len())
            .max_by(|&i, &j| self.amps[i].norm_sqr().total_cmp(&self.amps[j].norm_sqr()))
            .expect("nonempty state");
        if other.amps[pivot].norm() < 1e-300 {
            return f64::INFINITY;
        }
        let phase = self.amps[pivot] / other.amps[pivot];
        let phase = phase / phase.norm();
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }

    /// JSON dump: `{ "num_qubits": n, "amplitudes": [[re, im], ...] }` in
    /// basis-index order.
    pub fn to_json(&self) -> String {
        let dump = StateDump {
            num_qubits: self.num_qubits,
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        };
        serde_json::to_string(&dump).expect("state serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dump: StateDump =
            serde_json::from_str(text).map_err(|e| Error::parse(0, e.to_string()))?;
        let amps = dump
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let state = Self::from_amplitudes(amps)?;
        if state.num_qubits != dump.num_qubits {
            return Err(Error::InvalidArgument(format!(
                "num_qubits {} does not match {} amplitudes",
                dump.num_qubits,
                1usize << state.num_qubits
            )));
        }
        Ok(state)
    }
}

/// Run a circuit from |0...0⟩.
pub fn run(circuit: &Circuit) -> Result<StateVector> {
    let mut state = StateVector::init_zero(circuit.num_qubits())?;
    state.apply_circuit(circuit)?;
    Ok(state)
}
