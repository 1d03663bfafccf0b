//! Preset builders for the two demo applications: counting binary
//! strings without consecutive ones (whose totals follow the Fibonacci
//! recurrence, indexed by string length so F(1)=2, F(2)=3), and the
//! zero-sum subset problem over an integer multiset.

use std::collections::BTreeSet;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::qdict::{PolynomialSpec, Term};
use crate::sim::MAX_QUBITS;

use std::f64::consts::FRAC_PI_2;

/// A multiset of integers and a target sum; the selected subsets are
/// those summing to the target (0 reproduces the zero-sum problem, where
/// the empty subset always qualifies).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    pub elements: Vec<i64>,
    pub target: i64,
}

/// Superposition circuit whose support is exactly the length-n strings
/// without consecutive ones: qubit 0 gets Ry(π/2); every later qubit
/// gets Ry(π/2) followed by Ry(−π/2) controlled on its predecessor, so a
/// 1 forces the next qubit back to 0. The distribution is not uniform;
/// only the support is guaranteed.
pub fn fib_heuristic_circuit(n: usize) -> Result<Circuit> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(Error::ResourceLimit {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    let mut c = Circuit::new(n);
    c.ry(FRAC_PI_2, 0)?;
    for i in 1..n {
        c.ry(FRAC_PI_2, i)?;
        c.ry_ctl(-FRAC_PI_2, i, &[i - 1])?;
    }
    Ok(c)
}

/// True when the binary representation has no two adjacent set bits.
pub fn fib_naive_predicate(k: usize) -> bool {
    k & (k >> 1) == 0
}

/// All length-n strings without consecutive ones, as basis indices.
pub fn fib_good_set(n: usize) -> BTreeSet<usize> {
    (0..1usize << n)
        .filter(|&k| fib_naive_predicate(k))
        .collect()
}

/// The adjacent-pair counter Σ x_i·x_{i+1}; its zero set is exactly the
/// no-consecutive-ones strings. n = 1 gives the constant-zero polynomial
/// (every string qualifies).
pub fn fib_canonical_poly(n: usize) -> Result<PolynomialSpec> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "string length must be at least 1".into(),
        ));
    }
    let terms = (0..n.saturating_sub(1))
        .map(|i| Term::new(1, &[i, i + 1]))
        .collect();
    PolynomialSpec::new(n, terms)
}

/// Reference count of length-n strings without consecutive ones, from
/// the recurrence F(n) = F(n−1) + F(n−2) with F(1) = 2, F(2) = 3.
pub fn fib_reference(n: usize) -> u64 {
    let (mut a, mut b) = (2u64, 3u64); // F(1), F(2)
    match n {
        0 => 1,
        1 => a,
        2 => b,
        _ => {
            for _ in 3..=n {
                let next = a + b;
                a = b;
                b = next;
            }
            b
        }
    }
}

/// Σ a_i·x_i − target: selected subsets evaluate to zero.
pub fn subset_sum_poly(instance: &SubsetSumInstance) -> PolynomialSpec {
    let mut terms: Vec<Term> = instance
        .elements
        .iter()
        .enumerate()
        .map(|(i, &a)| Term::new(a, &[i]))
        .collect();
    if instance.target != 0 {
        terms.push(Term::constant(-instance.target));
    }
    PolynomialSpec::new(instance.elements.len(), terms)
        .expect("subset-sum terms are always well formed")
}

/// Exhaustive count of keys where the polynomial evaluates to exactly
/// `match_value`, in exact integer arithmetic with no modular reduction. The
/// brute-force cross-check for every counting result.
pub fn classical_count(poly: &PolynomialSpec, match_value: i64) -> Result<u64> {
    if poly.num_vars > 24 {
        return Err(Error::ResourceLimit {
            requested: poly.num_vars,
            max: 24,
        });
    }
    Ok((0..1usize << poly.num_vars)
        .filter(|&k| poly.evaluate_key(k) == match_value)
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run, SUPPORT_THRESHOLD};

    #[test]
    fn two_qubit_circuit_eliminates_the_forbidden_pair() {
        let state = run(&fib_heuristic_circuit(2).unwrap()).unwrap();
        assert!((state.probability(0b00) - 0.25).abs() < 1e-12);
        assert!((state.probability(0b01) - 0.25).abs() < 1e-12);
        assert!((state.probability(0b10) - 0.50).abs() < 1e-12);
        assert!(state.probability(0b11) < 1e-24);
    }

    #[test]
    fn heuristic_support_sizes_follow_the_recurrence() {
        for n in 1..=7 {
            let state = run(&fib_heuristic_circuit(n).unwrap()).unwrap();
            let support = state.nonzero_support(SUPPORT_THRESHOLD);
            assert_eq!(support.len() as u64, fib_reference(n), "n = {n}");
            assert!(support.iter().all(|b| fib_naive_predicate(b.0)));
        }
    }

    #[test]
    fn single_qubit_support_is_everything() {
        let state = run(&fib_heuristic_circuit(1).unwrap()).unwrap();
        assert_eq!(state.nonzero_support(SUPPORT_THRESHOLD).len(), 2);
    }

    #[test]
    fn predicate_enumerates_the_good_strings() {
        assert_eq!(
            fib_good_set(3).into_iter().collect::<Vec<_>>(),
            vec![0, 1, 2, 4, 5]
        );
        assert!(!fib_naive_predicate(0b11));
        assert_eq!(fib_good_set(4).len(), 8);
    }

    #[test]
    fn canonical_polynomial_counts_adjacent_pairs() {
        let poly = fib_canonical_poly(3).unwrap();
        assert_eq!(
            poly.terms,
            vec![Term::new(1, &[0, 1]), Term::new(1, &[1, 2])]
        );
        assert_eq!(poly.evaluate_key(0b111), 2);
        assert_eq!(poly.evaluate_key(0b101), 0);

        let trivial = fib_canonical_poly(1).unwrap();
        assert_eq!(trivial.num_vars, 1);
        assert!(trivial.terms.is_empty());
    }

    #[test]
    fn three_encodings_agree_with_the_recurrence() {
        for n in 1..=10 {
            let expected = fib_reference(n);
            let support = run(&fib_heuristic_circuit(n).unwrap())
                .unwrap()
                .nonzero_support(SUPPORT_THRESHOLD)
                .len() as u64;
            let predicate = fib_good_set(n).len() as u64;
            let canonical = classical_count(&fib_canonical_poly(n).unwrap(), 0).unwrap();
            assert_eq!(support, expected, "heuristic support at n = {n}");
            assert_eq!(predicate, expected, "predicate count at n = {n}");
            assert_eq!(canonical, expected, "polynomial zero set at n = {n}");
        }
    }

    #[test]
    fn canonical_zero_value_probability_is_exact() {
        for n in 3..=6 {
            let poly = fib_canonical_poly(n).unwrap();
            let layout = crate::qdict::DictionaryLayout::auto(&poly).unwrap();
            let encoded = crate::qdict::encode(&poly, &layout).unwrap();
            let expected = fib_reference(n) as f64 / (1u64 << n) as f64;
            assert!(
                (encoded.value_probability(0) - expected).abs() < 1e-9,
                "n = {n}"
            );
        }
    }

    #[test]
    fn subset_sum_polynomial_matches_hand_enumeration() {
        let instance = SubsetSumInstance {
            elements: vec![2, 1, -5, 2],
            target: 0,
        };
        let poly = subset_sum_poly(&instance);
        let zero_keys: Vec<usize> = (0..16).filter(|&k| poly.evaluate_key(k) == 0).collect();
        assert_eq!(zero_keys, vec![0b0000, 0b1111]);
        assert_eq!(classical_count(&poly, 0).unwrap(), 2);
    }

    #[test]
    fn empty_subset_always_sums_to_zero() {
        let instance = SubsetSumInstance {
            elements: vec![3, -7, 11],
            target: 0,
        };
        let poly = subset_sum_poly(&instance);
        assert_eq!(poly.evaluate_key(0), 0);
        assert!(classical_count(&poly, 0).unwrap() >= 1);
    }

    #[test]
    fn nonzero_targets_shift_the_constant() {
        let single = SubsetSumInstance {
            elements: vec![1],
            target: 1,
        };
        let poly = subset_sum_poly(&single);
        let hits: Vec<usize> = (0..2).filter(|&k| poly.evaluate_key(k) == 0).collect();
        assert_eq!(hits, vec![1]);

        let zero_element = SubsetSumInstance {
            elements: vec![0],
            target: 0,
        };
        let both = subset_sum_poly(&zero_element);
        assert_eq!(classical_count(&both, 0).unwrap(), 2);
    }

    #[test]
    fn classical_count_of_unattainable_values_is_zero() {
        let poly = fib_canonical_poly(4).unwrap();
        assert_eq!(classical_count(&poly, 17).unwrap(), 0);
        assert_eq!(classical_count(&poly, -1).unwrap(), 0);
    }

    #[test]
    fn classical_count_guards_register_width() {
        let poly = PolynomialSpec::constant(25, 0);
        assert!(classical_count(&poly, 0).is_err());
    }
}
