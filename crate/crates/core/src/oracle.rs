//! Reference arithmetic, independent of circuit evaluation.

use num_bigint::BigUint;
use num_traits::One;

use crate::ba::SignificanceVector;
use crate::error::CircuitError;

/// `sum(2^s_i * x_i)` computed directly on big integers.
pub fn oracle_value(s: &SignificanceVector, assignment: &[bool]) -> Result<BigUint, CircuitError> {
    if s.len() != assignment.len() {
        return Err(CircuitError::LengthMismatch {
            expected: s.len(),
            actual: assignment.len(),
        });
    }
    let mut total = BigUint::default();
    for (&weight, &bit) in s.entries().iter().zip(assignment) {
        if bit {
            total += BigUint::one() << weight;
        }
    }
    Ok(total)
}

/// Exhaustive bit-parallel check for circuits whose values fit in `u128`.
#[cfg(test)]
pub(crate) fn assert_matches_exhaustive(c: &crate::Circuit, s: &[u64]) {
    use alloc::vec::Vec;
    let n = s.len();
    assert_eq!(c.input_count(), n);
    assert!(n <= 24);
    let total: u64 = 1 << n;
    let mut scratch = Vec::new();
    let mut start = 0u64;
    while start < total {
        let lanes = (total - start).min(64);
        let words: Vec<u64> = (0..n)
            .map(|i| (0..lanes).fold(0u64, |w, j| w | (((start + j) >> i & 1) << j)))
            .collect();
        let outs = c.evaluate_words(&words, &mut scratch).unwrap();
        for j in 0..lanes {
            let x = start + j;
            let expected: u128 = (0..n)
                .filter(|&i| x >> i & 1 == 1)
                .map(|i| 1u128 << s[i])
                .sum();
            let actual: u128 = outs
                .iter()
                .zip(c.outputs())
                .filter(|(w, _)| *w >> j & 1 == 1)
                .map(|(_, o)| 1u128 << o.significance)
                .sum();
            assert_eq!(actual, expected, "assignment {x:#b}");
        }
        start += lanes;
    }
}
