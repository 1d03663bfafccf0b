//! Exact statevector simulation plus an oracle-construction toolkit:
//! integer polynomials over binary variables compile into canonical
//! quantum oracles, which drive generalized Grover search, amplitude
//! estimation, and quantum counting, plus pixel-graph rendering of the
//! encoded states.

pub mod amplify;
pub mod circuit;
pub mod error;
pub mod oracle;
pub mod problems;
pub mod qdict;
pub mod sim;
pub mod viz;

pub use amplify::{
    amplitude_estimation, best_two_mass, estimate_with_iterate, grover_iterate, grover_search,
    quantum_count, quantum_count_with_layout, EstimateResult, GroverConfig, IterateSign,
    SearchOutcome, MAX_RESULT_QUBITS,
};
pub use circuit::{hadamard_layer, qft, Circuit, GateKind, GateOp};
pub use error::{Error, Result};
pub use oracle::{
    build_canonical_oracle, build_diffusion, build_matching_oracle, build_naive_oracle, compile,
    CompiledOracle, OracleSpec,
};
pub use problems::{
    classical_count, fib_canonical_poly, fib_good_set, fib_heuristic_circuit, fib_naive_predicate,
    fib_reference, subset_sum_poly, SubsetSumInstance,
};
pub use qdict::{
    auto_size, auto_size_unsigned, build_encoder, build_encoder_unchecked, encode,
    geometric_rotation, DictionaryLayout, EncodedState, PolynomialSpec, Term,
};
pub use sim::{run, BasisIndex, Histogram, Outcome, StateVector, MAX_QUBITS, SUPPORT_THRESHOLD};
pub use viz::{render_counts, render_histogram, render_state, PixelGraph};
