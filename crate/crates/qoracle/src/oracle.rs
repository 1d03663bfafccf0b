//! Oracle builders.
//!
//! Three forms, all phase oracles (they flip the sign of selected basis
//! states and touch nothing else):
//!
//! - naive: one X-conjugated multi-controlled Z per good state, so cost
//!   grows linearly with the size of the good set;
//! - matching: a single X-conjugated multi-controlled Z on the value
//!   register, flipping every state whose value equals the match;
//! - canonical: encoder-conjugated matching, B† O_B B, which flips the
//!   keys whose polynomial value matches; the per-state enumeration
//!   disappears into the encoder.
//!
//! Plus the diffusion operator D, a phase flip of |0...0⟩ on a register.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::qdict::{build_encoder, DictionaryLayout, PolynomialSpec};

/// Cache the good-key table only up to this many key qubits.
const GOOD_SET_CACHE_LIMIT: usize = 20;

/// Declarative oracle description; compile with [`compile`].
#[derive(Clone, Debug)]
pub enum OracleSpec {
    /// Explicit set of good basis states over an n-qubit register.
    Naive {
        num_qubits: usize,
        good_set: BTreeSet<usize>,
    },
    /// Keys whose polynomial value matches, via the dictionary encoder.
    Canonical {
        poly: PolynomialSpec,
        layout: DictionaryLayout,
        match_value: i64,
    },
}

#[derive(Clone, Debug)]
enum GoodStates {
    Explicit(BTreeSet<usize>),
    Residue {
        poly: PolynomialSpec,
        modulus: i64,
        residue: i64,
        cache: Option<Vec<bool>>,
    },
}

/// A compiled phase oracle: the circuit plus the classical predicate it
/// implements, kept alongside for verification and success-probability
/// readouts.
#[derive(Clone, Debug)]
pub struct CompiledOracle {
    circuit: Circuit,
    num_qubits: usize,
    search_qubits: usize,
    encoder: Option<Circuit>,
    good: GoodStates,
}

impl CompiledOracle {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Total register width the oracle acts on (keys plus any value
    /// register).
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Width of the search (key) register, a prefix of the full register.
    pub fn search_qubits(&self) -> usize {
        self.search_qubits
    }

    /// The encoder B, present only for canonical oracles.
    pub fn encoder(&self) -> Option<&Circuit> {
        self.encoder.as_ref()
    }

    /// Classical predicate over the search register.
    pub fn is_good_key(&self, key: usize) -> bool {
        match &self.good {
            GoodStates::Explicit(set) => set.contains(&key),
            GoodStates::Residue {
                poly,
                modulus,
                residue,
                cache,
            } => match cache {
                Some(table) => table[key],
                None => poly.evaluate_key(key).rem_euclid(*modulus) == *residue,
            },
        }
    }

    /// Predicate over the full register: only the key bits decide.
    pub fn is_good_state(&self, basis: usize) -> bool {
        self.is_good_key(basis >> (self.num_qubits - self.search_qubits))
    }
}

/// Flip the phase of exactly the basis pattern `pattern` over `qubits`:
/// X on every zero bit, a multi-controlled Z, then X again.
fn phase_flip_pattern(circuit: &mut Circuit, qubits: &[usize], pattern: usize) -> Result<()> {
    let width = qubits.len();
    let zeros: Vec<usize> = (0..width)
        .filter(|&pos| (pattern >> (width - 1 - pos)) & 1 == 0)
        .map(|pos| qubits[pos])
        .collect();
    for &q in &zeros {
        circuit.x(q)?;
    }
    let (&target, controls) = qubits.split_last().expect("nonempty qubit range");
    circuit.z_ctl(target, controls)?;
    for &q in &zeros {
        circuit.x(q)?;
    }
    Ok(())
}

/// One phase-flip block per good state. The empty set compiles to the
/// identity.
pub fn build_naive_oracle(good_set: &BTreeSet<usize>, num_qubits: usize) -> Result<CompiledOracle> {
    if num_qubits < 1 {
        return Err(Error::ResourceLimit {
            requested: 0,
            max: crate::sim::MAX_QUBITS,
        });
    }
    let dim = 1usize << num_qubits;
    if let Some(&s) = good_set.iter().next_back() {
        if s >= dim {
            return Err(Error::InvalidArgument(format!(
                "good state {s} is out of range for {num_qubits} qubits"
            )));
        }
    }
    let qubits: Vec<usize> = (0..num_qubits).collect();
    let mut circuit = Circuit::new(num_qubits);
    for &s in good_set {
        phase_flip_pattern(&mut circuit, &qubits, s)?;
    }
    Ok(CompiledOracle {
        circuit,
        num_qubits,
        search_qubits: num_qubits,
        encoder: None,
        good: GoodStates::Explicit(good_set.clone()),
    })
}

/// The binary-matching oracle O_B: flips every basis state whose value
/// register equals `match_value` mod 2^m, whatever the keys read.
pub fn build_matching_oracle(layout: &DictionaryLayout, match_value: i64) -> CompiledOracle {
    let raw = layout.encode_value(match_value);
    let qubits: Vec<usize> = (layout.key_qubits..layout.total_qubits()).collect();
    let mut circuit = Circuit::new(layout.total_qubits());
    phase_flip_pattern(&mut circuit, &qubits, raw).expect("value register is nonempty");

    // As a standalone oracle O_B marks on the value register alone; every
    // key is good exactly when its value matches, which for the raw
    // register semantics means: all keys.
    CompiledOracle {
        circuit,
        num_qubits: layout.total_qubits(),
        search_qubits: layout.key_qubits,
        encoder: None,
        good: GoodStates::Explicit((0..1usize << layout.key_qubits).collect()),
    }
}

/// The canonical oracle O = B† O_B B. On the subspace where the value
/// register is |0⟩ it acts as a ±1 diagonal on keys: −1 exactly when the
/// polynomial evaluates to `match_value` mod 2^m.
pub fn build_canonical_oracle(
    poly: &PolynomialSpec,
    layout: &DictionaryLayout,
    match_value: i64,
) -> Result<CompiledOracle> {
    let encoder = build_encoder(poly, layout)?;
    let matching = build_matching_oracle(layout, match_value);
    let circuit = encoder
        .compose(matching.circuit())?
        .compose(&encoder.dagger())?;

    let modulus = 1i64 << layout.value_qubits;
    let residue = layout.encode_value(match_value) as i64;
    let cache = if layout.key_qubits <= GOOD_SET_CACHE_LIMIT {
        Some(
            (0..1usize << layout.key_qubits)
                .map(|k| poly.evaluate_key(k).rem_euclid(modulus) == residue)
                .collect(),
        )
    } else {
        None
    };
    Ok(CompiledOracle {
        circuit,
        num_qubits: layout.total_qubits(),
        search_qubits: layout.key_qubits,
        encoder: Some(encoder),
        good: GoodStates::Residue {
            poly: poly.clone(),
            modulus,
            residue,
            cache,
        },
    })
}

/// Compile either oracle form.
pub fn compile(spec: &OracleSpec) -> Result<CompiledOracle> {
    match spec {
        OracleSpec::Naive {
            num_qubits,
            good_set,
        } => build_naive_oracle(good_set, *num_qubits),
        OracleSpec::Canonical {
            poly,
            layout,
            match_value,
        } => build_canonical_oracle(poly, layout, *match_value),
    }
}

/// The diffusion operator D: multiply the amplitude of |0...0⟩ on
/// `range` by −1, leaving every other basis state alone.
pub fn build_diffusion(range: Range<usize>, num_qubits: usize) -> Result<Circuit> {
    if range.is_empty() {
        return Err(Error::InvalidArgument(
            "diffusion range must be nonempty".into(),
        ));
    }
    let qubits: Vec<usize> = range.collect();
    let mut circuit = Circuit::new(num_qubits);
    phase_flip_pattern(&mut circuit, &qubits, 0)?;
    Ok(circuit)
}
