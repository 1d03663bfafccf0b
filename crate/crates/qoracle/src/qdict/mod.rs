//! Quantum Dictionary encoder.
//!
//! Compiles a [`PolynomialSpec`] into the property-encoding operator B
//! that entangles every key k with its value f(k): after H on the keys,
//!
//! ```text
//! B = [H on value register]
//!     · [one controlled rotation ladder per term]
//!     · [inverse QFT on value register]
//! ```
//!
//! leaves the register in 2^{-n/2} Σ_k |k⟩|f(k) mod 2^m⟩. Values live in
//! two's complement: rotation composition is modular arithmetic, so
//! negative values land on their mod-2^m representatives. Keys occupy
//! qubits [0, n), values [n, n+m); key bit x_i is qubit i (MSB first).

mod poly;

pub use poly::{PolynomialSpec, Term};

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::circuit::{hadamard_layer, qft, Circuit};
use crate::error::{Error, Result};
use crate::sim::{run, StateVector, MAX_QUBITS};

/// Register assignment for a key/value dictionary. `signed` selects the
/// two's-complement reading of the value register (one sign bit); the
/// unsigned reading fits non-negative polynomials in fewer qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DictionaryLayout {
    pub key_qubits: usize,
    pub value_qubits: usize,
    pub signed: bool,
}

impl DictionaryLayout {
    pub fn new(key_qubits: usize, value_qubits: usize, signed: bool) -> Result<Self> {
        if key_qubits < 1 || value_qubits < 1 {
            return Err(Error::InvalidArgument(
                "key and value registers both need at least one qubit".into(),
            ));
        }
        if key_qubits + value_qubits > MAX_QUBITS {
            return Err(Error::ResourceLimit {
                requested: key_qubits + value_qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(DictionaryLayout {
            key_qubits,
            value_qubits,
            signed,
        })
    }

    /// Signed auto-sizing: smallest m whose two's-complement window holds
    /// the polynomial's attainable-value bounds.
    pub fn auto(poly: &PolynomialSpec) -> Result<Self> {
        Self::new(poly.num_vars, auto_size(poly), true)
    }

    /// Unsigned auto-sizing; the polynomial must be non-negative.
    pub fn auto_unsigned(poly: &PolynomialSpec) -> Result<Self> {
        Self::new(poly.num_vars, auto_size_unsigned(poly)?, false)
    }

    pub fn total_qubits(&self) -> usize {
        self.key_qubits + self.value_qubits
    }

    fn modulus(&self) -> i64 {
        1i64 << self.value_qubits
    }

    /// The window of values this layout can represent faithfully.
    pub fn value_window(&self) -> (i64, i64) {
        if self.signed {
            let half = self.modulus() / 2;
            (-half, half - 1)
        } else {
            (0, self.modulus() - 1)
        }
    }

    /// Reduce a value to its register pattern (two's complement).
    pub fn encode_value(&self, value: i64) -> usize {
        value.rem_euclid(self.modulus()) as usize
    }

    /// Read a register pattern back under this layout's signedness.
    pub fn decode_value(&self, raw: usize) -> i64 {
        let raw = raw as i64;
        if self.signed && raw >= self.modulus() / 2 {
            raw - self.modulus()
        } else {
            raw
        }
    }

    pub fn key_of(&self, basis: usize) -> usize {
        basis >> self.value_qubits
    }

    pub fn raw_value_of(&self, basis: usize) -> usize {
        basis & ((1 << self.value_qubits) - 1)
    }

    pub fn basis_of(&self, key: usize, raw_value: usize) -> usize {
        (key << self.value_qubits) | raw_value
    }

    /// Check that every attainable value is representable without
    /// wrapping.
    pub fn validate_bounds(&self, bounds: (i64, i64)) -> Result<()> {
        let (min, max) = bounds;
        let (lo, hi) = self.value_window();
        if min < lo || max > hi {
            return Err(Error::Aliasing {
                value_qubits: self.value_qubits,
                min,
                max,
            });
        }
        Ok(())
    }

    /// Rotation ladder on the value register, every gate additionally
    /// controlled on the given key qubits.
    pub fn geometric_rotation(&self, theta: f64, controls: &[usize]) -> Result<Circuit> {
        for &c in controls {
            if c >= self.key_qubits {
                return Err(Error::QubitOutOfRange {
                    index: c,
                    num_qubits: self.key_qubits,
                });
            }
        }
        let mut circuit = geometric_rotation(self.value_qubits, theta).shifted(self.key_qubits);
        for &c in controls {
            circuit = circuit.controlled(c)?;
        }
        circuit.padded(self.total_qubits())
    }
}

/// Smallest value-register width whose signed window holds the
/// polynomial's bounds; always reserves a sign bit. Any i64 bounds fit
/// by m = 64, far past what a layout accepts.
pub fn auto_size(poly: &PolynomialSpec) -> usize {
    let (min, max) = poly.value_bounds();
    let (min, max) = (min as i128, max as i128);
    let mut m = 1;
    loop {
        let half = 1i128 << (m - 1);
        if -half <= min && max < half {
            return m;
        }
        m += 1;
    }
}

/// Unsigned sizing: m = ⌈log2(max+1)⌉, at least 1. Errors if the
/// polynomial can go negative.
pub fn auto_size_unsigned(poly: &PolynomialSpec) -> Result<usize> {
    let (min, max) = poly.value_bounds();
    if min < 0 {
        return Err(Error::InvalidArgument(format!(
            "polynomial attains {min} < 0; unsigned layout needs non-negative values"
        )));
    }
    let mut m = 1;
    while max as i128 > (1i128 << m) - 1 {
        m += 1;
    }
    Ok(m)
}

/// The geometric-sequence ladder U_G(θ): the phase gate R(2^i θ) applied
/// to qubit m−1−i. On an equal superposition this prepares
/// 2^{-m/2} Σ_k e^{ikθ}|k⟩; with θ = 2πk/2^m an inverse QFT then yields
/// |k mod 2^m⟩ exactly.
pub fn geometric_rotation(value_qubits: usize, theta: f64) -> Circuit {
    let mut c = Circuit::new(value_qubits);
    for i in 0..value_qubits {
        let angle = theta * (1u64 << i) as f64;
        c.phase(angle, value_qubits - 1 - i)
            .expect("index in range");
    }
    c
}

fn encoder_circuit(poly: &PolynomialSpec, layout: &DictionaryLayout) -> Result<Circuit> {
    if poly.num_vars != layout.key_qubits {
        return Err(Error::InvalidArgument(format!(
            "polynomial over {} variables does not fit a {}-qubit key register",
            poly.num_vars, layout.key_qubits
        )));
    }
    let n = layout.key_qubits;
    let m = layout.value_qubits;
    let step = TAU / (1u64 << m) as f64;
    let mut b = hadamard_layer(n..n + m, n + m)?;
    for term in &poly.terms {
        let ladder = layout.geometric_rotation(step * term.coeff as f64, &term.vars)?;
        b = b.compose(&ladder)?;
    }
    b.compose(&qft(m, true).shifted(n))
}

/// Compile the property-encoding operator B. Fails if the polynomial's
/// attainable values exceed the layout's window (two's-complement
/// aliasing would silently corrupt the encoding).
pub fn build_encoder(poly: &PolynomialSpec, layout: &DictionaryLayout) -> Result<Circuit> {
    layout.validate_bounds(poly.value_bounds())?;
    encoder_circuit(poly, layout)
}

/// [`build_encoder`] without the aliasing validation, for callers that
/// want wrap-around mod 2^m on purpose.
pub fn build_encoder_unchecked(
    poly: &PolynomialSpec,
    layout: &DictionaryLayout,
) -> Result<Circuit> {
    encoder_circuit(poly, layout)
}

/// A dictionary state: every key in superposition, entangled with its
/// value.
#[derive(Clone, Debug)]
pub struct EncodedState {
    pub state: StateVector,
    pub layout: DictionaryLayout,
}

impl EncodedState {
    pub fn amplitude(&self, key: usize, raw_value: usize) -> Complex64 {
        self.state.amplitude(self.layout.basis_of(key, raw_value))
    }

    /// Probability that the value register reads `value`.
    pub fn value_probability(&self, value: i64) -> f64 {
        let raw = self.layout.encode_value(value);
        (0..1usize << self.layout.key_qubits)
            .map(|k| self.amplitude(k, raw).norm_sqr())
            .sum()
    }

    /// Probability of one key, summed over values.
    pub fn key_marginal(&self, key: usize) -> f64 {
        (0..1usize << self.layout.value_qubits)
            .map(|v| self.amplitude(key, v).norm_sqr())
            .sum()
    }
}

/// Prepare the full dictionary state: H on the keys, then B.
pub fn encode(poly: &PolynomialSpec, layout: &DictionaryLayout) -> Result<EncodedState> {
    let total = layout.total_qubits();
    let circuit =
        hadamard_layer(0..layout.key_qubits, total)?.compose(&build_encoder(poly, layout)?)?;
    Ok(EncodedState {
        state: run(&circuit)?,
        layout: *layout,
    })
}
