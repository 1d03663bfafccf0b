//! Generalized Grover iterate, search, amplitude estimation, and
//! quantum counting over any (state preparation, oracle) pair.
//!
//! The iterate is G = A·D·A†·O. By default no leading minus sign is
//! attached and estimates are read through cos²; switching
//! [`IterateSign::Minus`] attaches a global −1 to G and reads estimates
//! through sin². The two pairings are conjugate (the eigenphases shift
//! by π), so they produce identical distributions over estimates; a
//! calibration test asserts exactly that.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{hadamard_layer, qft, Circuit};
use crate::error::{Error, Result};
use crate::oracle::{build_canonical_oracle, build_diffusion, CompiledOracle};
use crate::qdict::{DictionaryLayout, PolynomialSpec};
use crate::sim::{run, Histogram, MAX_QUBITS};

/// Desk-scale guard on the estimation register.
pub const MAX_RESULT_QUBITS: usize = 8;

/// Sign convention of the iterate, paired with the estimate mapping:
/// `Plus` is G with p = cos²(yπ/2^m), `Minus` is −G with sin².
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IterateSign {
    #[default]
    Plus,
    Minus,
}

impl IterateSign {
    fn estimate(self, y: u64, m_result: usize) -> f64 {
        let angle = y as f64 * PI / (1u64 << m_result) as f64;
        match self {
            IterateSign::Plus => angle.cos().powi(2),
            IterateSign::Minus => angle.sin().powi(2),
        }
    }

    /// Fold y onto the half-grid index a ∈ [0, 2^{m−1}] with estimate
    /// sin²(aπ/2^m); both pairings share this canonical form.
    fn angle_index(self, y: u64, m_result: usize) -> usize {
        let dim = 1u64 << m_result;
        match self {
            IterateSign::Plus => (dim as i64 / 2 - y as i64).unsigned_abs() as usize,
            IterateSign::Minus => y.min(dim - y) as usize,
        }
    }
}

/// Everything the Grover iterate needs: the preparation A, a compiled
/// oracle O, and the register D reflects over (the search register; for
/// dictionary oracles the value register sits outside it).
#[derive(Clone, Debug)]
pub struct GroverConfig {
    pub state_prep: Circuit,
    pub oracle: CompiledOracle,
    pub diffusion_range: std::ops::Range<usize>,
    pub sign: IterateSign,
}

impl GroverConfig {
    /// Uniform preparation over the oracle's search register.
    pub fn uniform(oracle: CompiledOracle) -> Result<Self> {
        let total = oracle.num_qubits();
        let n = oracle.search_qubits();
        Ok(GroverConfig {
            state_prep: hadamard_layer(0..n, total)?,
            diffusion_range: 0..n,
            sign: IterateSign::default(),
            oracle,
        })
    }
}

/// −I on the whole register, spelled with four one-qubit gates so the
/// sign survives the controlled-power construction in the estimation
/// circuit (under a control it collapses to a phase on the control).
fn global_phase_flip(qubit: usize, num_qubits: usize) -> Result<Circuit> {
    let mut c = Circuit::new(num_qubits);
    c.x(qubit)?;
    c.phase(PI, qubit)?;
    c.x(qubit)?;
    c.phase(PI, qubit)?;
    Ok(c)
}

/// The Grover iterate G = A·D·A†·O as a circuit: oracle first, then A†,
/// D, A. `IterateSign::Minus` appends a global −1.
pub fn grover_iterate(config: &GroverConfig) -> Result<Circuit> {
    let total = config.oracle.num_qubits();
    if config.state_prep.num_qubits() != total {
        return Err(Error::RegisterMismatch {
            left: config.state_prep.num_qubits(),
            right: total,
        });
    }
    let diffusion = build_diffusion(config.diffusion_range.clone(), total)?;
    let mut g = config
        .oracle
        .circuit()
        .compose(&config.state_prep.dagger())?;
    g = g.compose(&diffusion)?;
    g = g.compose(&config.state_prep)?;
    if config.sign == IterateSign::Minus {
        g = g.compose(&global_phase_flip(config.diffusion_range.start, total)?)?;
    }
    Ok(g)
}

/// Result of a Grover search run.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Number of iterate applications, ⌊(π/4)·√(N/|E|)⌋.
    pub iterations: u64,
    pub circuit: Circuit,
    /// Exact probability of measuring a good state.
    pub success_probability: f64,
    pub histogram: Histogram,
}

/// Run amplification with the iteration count that maximally amplifies
/// `num_solutions` good states. For dictionary oracles the encoder B is
/// appended, so measurements show (key, value) pairs.
pub fn grover_search(
    config: &GroverConfig,
    num_solutions: u64,
    shots: u64,
    seed: u64,
) -> Result<SearchOutcome> {
    if num_solutions == 0 {
        return Err(Error::ZeroSolutions);
    }
    let n = config.diffusion_range.len();
    let search_space = 1u64 << n;
    if num_solutions > search_space {
        return Err(Error::InvalidArgument(format!(
            "{num_solutions} solutions cannot fit a search space of {search_space}"
        )));
    }
    let iterations =
        ((PI / 4.0) * (search_space as f64 / num_solutions as f64).sqrt()).floor() as u64;
    let g = grover_iterate(config)?;
    let mut circuit = config.state_prep.compose(&g.power(iterations as usize))?;
    if let Some(encoder) = config.oracle.encoder() {
        circuit = circuit.compose(encoder)?;
    }
    let state = run(&circuit)?;
    let success_probability = state.probability_of(|s| config.oracle.is_good_state(s));
    let histogram = state.sample(shots, seed);
    Ok(SearchOutcome {
        iterations,
        circuit,
        success_probability,
        histogram,
    })
}

/// Amplitude-estimation outcome. `exact_distribution[y]` is the exact
/// probability of measuring y on the result register, computed from the
/// final statevector; `measured_y` is the modal y (ties toward smaller).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    #[serde(rename = "y")]
    pub measured_y: u64,
    pub m_result: usize,
    pub p_estimate: f64,
    pub count_estimate: f64,
    #[serde(rename = "distribution")]
    pub exact_distribution: Vec<f64>,
    /// Estimate mapping this result was produced under; not part of the
    /// wire schema.
    #[serde(skip, default)]
    pub sign: IterateSign,
}

impl EstimateResult {
    /// The probability estimate a measurement of y would map to.
    pub fn estimate_for(&self, y: u64) -> f64 {
        self.sign.estimate(y, self.m_result)
    }

    /// Exact distribution over estimate values, folded onto the half-grid
    /// a ∈ [0, 2^{m−1}] where the estimate is sin²(aπ/2^m). Both sign
    /// pairings agree on this form.
    pub fn estimate_distribution(&self) -> Vec<f64> {
        let half = (1usize << self.m_result) / 2;
        let mut folded = vec![0.0; half + 1];
        for (y, &p) in self.exact_distribution.iter().enumerate() {
            folded[self.sign.angle_index(y as u64, self.m_result)] += p;
        }
        folded
    }

    /// Count estimate rounded to the nearest integer.
    pub fn rounded_count(&self) -> u64 {
        self.count_estimate.round().max(0.0) as u64
    }

    /// Draw shots from the exact distribution (ChaCha8, seeded), for
    /// realism instead of the modal readout.
    pub fn sample_y(&self, shots: u64, seed: u64) -> BTreeMap<u64, u64> {
        let mut cdf = Vec::with_capacity(self.exact_distribution.len());
        let mut acc = 0.0;
        for &p in &self.exact_distribution {
            acc += p;
            cdf.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hist = BTreeMap::new();
        for _ in 0..shots {
            let x: f64 = rng.random::<f64>() * acc;
            let y = cdf.partition_point(|&c| c <= x).min(cdf.len() - 1) as u64;
            *hist.entry(y).or_insert(0) += 1;
        }
        hist
    }
}

/// Phase estimation of an arbitrary iterate: A on the main register, H
/// on the result register, controlled powers G^{2^k} (result qubit k
/// controls G^{2^k}), then an inverse QFT on the result register. The
/// result register occupies the low bits of the basis index.
pub fn estimate_with_iterate(
    state_prep: &Circuit,
    iterate: &Circuit,
    m_result: usize,
    sign: IterateSign,
    count_scale: f64,
) -> Result<EstimateResult> {
    if !(1..=MAX_RESULT_QUBITS).contains(&m_result) {
        return Err(Error::ResultRegisterLimit {
            requested: m_result,
            max: MAX_RESULT_QUBITS,
        });
    }
    let total = state_prep.num_qubits();
    if iterate.num_qubits() != total {
        return Err(Error::RegisterMismatch {
            left: iterate.num_qubits(),
            right: total,
        });
    }
    let full = total + m_result;
    if full > MAX_QUBITS {
        return Err(Error::ResourceLimit {
            requested: full,
            max: MAX_QUBITS,
        });
    }

    let mut circuit = state_prep.padded(full)?;
    for r in 0..m_result {
        circuit.h(total + r)?;
    }
    for k in 0..m_result {
        // Result qubit k carries place value 2^k, i.e. register position
        // m−1−k under the MSB-first convention.
        let control = total + m_result - 1 - k;
        let powered = iterate.power(1 << k).padded(full)?.controlled(control)?;
        circuit = circuit.compose(&powered)?;
    }
    circuit = circuit.compose(&qft(m_result, true).shifted(total))?;

    let state = run(&circuit)?;
    let y_dim = 1usize << m_result;
    let mut exact_distribution = vec![0.0; y_dim];
    for (basis, amp) in state.amplitudes().iter().enumerate() {
        exact_distribution[basis & (y_dim - 1)] += amp.norm_sqr();
    }
    // Modal y, ties toward smaller y.
    let mut measured_y = 0u64;
    for (y, &p) in exact_distribution.iter().enumerate().skip(1) {
        if p > exact_distribution[measured_y as usize] {
            measured_y = y as u64;
        }
    }
    let p_estimate = sign.estimate(measured_y, m_result);
    Ok(EstimateResult {
        measured_y,
        m_result,
        p_estimate,
        count_estimate: p_estimate * count_scale,
        exact_distribution,
        sign,
    })
}

/// Amplitude estimation for a Grover configuration; the count scale is
/// the search-space size 2^n.
pub fn amplitude_estimation(config: &GroverConfig, m_result: usize) -> Result<EstimateResult> {
    let iterate = grover_iterate(config)?;
    let count_scale = (1u64 << config.diffusion_range.len()) as f64;
    estimate_with_iterate(
        &config.state_prep,
        &iterate,
        m_result,
        config.sign,
        count_scale,
    )
}

/// Quantum counting: uniform keys, canonical oracle for
/// `poly = match_value`, amplitude estimation; the count is the estimate
/// times 2^n.
pub fn quantum_count(
    poly: &PolynomialSpec,
    match_value: i64,
    m_result: usize,
) -> Result<EstimateResult> {
    let layout = DictionaryLayout::auto(poly)?;
    quantum_count_with_layout(poly, &layout, match_value, m_result)
}

/// [`quantum_count`] with an explicit register layout.
pub fn quantum_count_with_layout(
    poly: &PolynomialSpec,
    layout: &DictionaryLayout,
    match_value: i64,
    m_result: usize,
) -> Result<EstimateResult> {
    let oracle = build_canonical_oracle(poly, layout, match_value)?;
    let config = GroverConfig::uniform(oracle)?;
    amplitude_estimation(&config, m_result)
}

/// Exact probability mass on the one or two grid estimates that bracket
/// `true_p`. Estimation theory puts at least 8/π² here whenever the
/// distribution comes from a genuine amplitude.
pub fn best_two_mass(result: &EstimateResult, true_p: f64) -> f64 {
    let dim = (1u64 << result.m_result) as f64;
    let half = (1usize << result.m_result) / 2;
    let folded = result.estimate_distribution();
    let estimate_at = |a: usize| (a as f64 * PI / dim).sin().powi(2);

    let mut lo = 0usize;
    for a in 0..=half {
        if estimate_at(a) <= true_p + 1e-12 {
            lo = a;
        }
    }
    let mut hi = half;
    for a in (0..=half).rev() {
        if estimate_at(a) >= true_p - 1e-12 {
            hi = a;
        }
    }
    if lo == hi {
        folded[lo]
    } else {
        folded[lo] + folded[hi]
    }
}
