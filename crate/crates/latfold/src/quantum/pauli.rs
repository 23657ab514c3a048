//! Diagonal Pauli-Z Hamiltonians from binary polynomials.
//!
//! Substituting q_i = (1 - Z_i)/2 into a multilinear term expands it over
//! all subsets of its variables. Terms are keyed by a bit mask marking
//! which qubits carry Z (mask 0 is the identity string), so the operator
//! is diagonal and its basis-state expectation reproduces the polynomial.

use crate::error::{Error, Result};
use crate::poly::BinaryPolynomial;
use std::collections::BTreeMap;

/// Mask width limit (masks are u64).
pub const MAX_PAULI_QUBITS: usize = 64;

/// Coefficients below this magnitude after cancellation are dropped.
const CANCEL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PauliHamiltonian {
    pub num_qubits: usize,
    /// (z-mask, coefficient), sorted by mask, coefficients nonzero.
    pub terms: Vec<(u64, f64)>,
}

impl PauliHamiltonian {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// ⟨b|H|b⟩ for the computational basis state with qubit i equal to
    /// bit i of `basis`.
    pub fn diagonal_energy(&self, basis: u64) -> f64 {
        self.terms
            .iter()
            .map(|&(mask, c)| {
                if (mask & basis).count_ones() % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Render one term as `±c Z<i>Z<j>…` or `±c I`.
    pub fn format_term(mask: u64, coeff: f64) -> String {
        let ops = if mask == 0 {
            "I".to_string()
        } else {
            (0..64)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| format!("Z{i}"))
                .collect::<Vec<_>>()
                .join("")
        };
        format!("{}{} {}", if coeff >= 0.0 { "+" } else { "" }, coeff, ops)
    }
}

/// Exact q = (1-Z)/2 substitution.
pub fn to_pauli(poly: &BinaryPolynomial) -> Result<PauliHamiltonian> {
    let n = poly.num_vars();
    if n > MAX_PAULI_QUBITS {
        return Err(Error::PauliWidth {
            vars: n,
            cap: MAX_PAULI_QUBITS,
        });
    }
    let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
    for (indices, coeff) in poly.iter_terms() {
        let k = indices.len();
        let scale = coeff / (1u64 << k) as f64;
        // Enumerate subsets of the term's variables; parity gives the sign.
        for subset in 0..(1u32 << k) {
            let mut mask = 0u64;
            for (pos, &var) in indices.iter().enumerate() {
                if subset >> pos & 1 == 1 {
                    mask |= 1 << var;
                }
            }
            let sign = if subset.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            *acc.entry(mask).or_insert(0.0) += sign * scale;
        }
    }
    acc.retain(|_, c| c.abs() > CANCEL_EPS);
    Ok(PauliHamiltonian {
        num_qubits: n,
        terms: acc.into_iter().collect(),
    })
}

/// Distinct Pauli strings after cancellation.
pub fn pauli_term_count(poly: &BinaryPolynomial) -> Result<usize> {
    Ok(to_pauli(poly)?.term_count())
}

/// Bitstring (variable order) to basis mask: bit i of the mask is
/// variable i, i.e. the leftmost bitstring character.
pub fn bits_to_mask(bits: &[u8]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0u64, |m, (i, &b)| m | ((b as u64) << i))
}

/// Inverse of [`bits_to_mask`].
pub fn mask_to_bits(mask: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((mask >> i) & 1) as u8).collect()
}
