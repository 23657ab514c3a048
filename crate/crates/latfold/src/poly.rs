//! Multilinear real-coefficient polynomials over binary variables.
//!
//! Terms are keyed by strictly sorted index sets (q² reduces to q), with
//! the empty set holding the constant. A `BTreeMap` keeps term order
//! deterministic, so rebuilding the same polynomial yields an identical
//! term map and identical serialized output.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Coefficients smaller than this in magnitude are treated as zero when
/// merging terms.
const PRUNE_EPS: f64 = 0.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryPolynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<u16>, f64>,
}

impl BinaryPolynomial {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, value: f64) -> Self {
        let mut p = Self::new(num_vars);
        p.add_term(&[], value);
        p
    }

    /// The monomial `q_i`.
    pub fn var(num_vars: usize, index: usize) -> Self {
        debug_assert!(index < num_vars);
        let mut p = Self::new(num_vars);
        p.add_term(&[index], 1.0);
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest index-set size (0 for constant-only or empty polynomials).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&[u16], f64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, indices: &[u16]) -> f64 {
        self.terms.get(indices).copied().unwrap_or(0.0)
    }

    /// Add `coeff` to the term over `indices` (any order, duplicates
    /// collapse multilinearly). Exact-zero results are pruned.
    pub fn add_term(&mut self, indices: &[usize], coeff: f64) {
        let mut key: Vec<u16> = indices.iter().map(|&i| i as u16).collect();
        key.sort_unstable();
        key.dedup();
        self.add_term_key(key, coeff);
    }

    fn add_term_key(&mut self, key: Vec<u16>, coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        debug_assert!(key.iter().all(|&i| (i as usize) < self.num_vars));
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                let v = *e.get() + coeff;
                if v.abs() <= PRUNE_EPS {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add_assign(&mut self, other: &BinaryPolynomial) {
        debug_assert_eq!(self.num_vars, other.num_vars);
        for (k, &v) in &other.terms {
            self.add_term_key(k.clone(), v);
        }
    }

    pub fn add(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        let mut out = self.clone();
        for (k, &v) in &other.terms {
            out.add_term_key(k.clone(), -v);
        }
        out
    }

    pub fn scale(&self, factor: f64) -> BinaryPolynomial {
        if factor == 0.0 {
            return BinaryPolynomial::new(self.num_vars);
        }
        let mut out = BinaryPolynomial::new(self.num_vars);
        for (k, &v) in &self.terms {
            out.terms.insert(k.clone(), v * factor);
        }
        out
    }

    /// Multilinear product: index sets merge by union.
    pub fn mul(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = BinaryPolynomial::new(self.num_vars);
        for (ka, &va) in &self.terms {
            for (kb, &vb) in &other.terms {
                let mut key = Vec::with_capacity(ka.len() + kb.len());
                key.extend_from_slice(ka);
                key.extend_from_slice(kb);
                key.sort_unstable();
                key.dedup();
                out.add_term_key(key, va * vb);
            }
        }
        out
    }

    pub fn square(&self) -> BinaryPolynomial {
        self.mul(self)
    }

    /// Value on a bit assignment (`bits[i]` is variable i).
    pub fn evaluate(&self, bits: &[u8]) -> Result<f64> {
        if bits.len() != self.num_vars {
            return Err(Error::EvalLength {
                expected: self.num_vars,
                actual: bits.len(),
            });
        }
        Ok(self.evaluate_unchecked(bits))
    }

    pub(crate) fn evaluate_unchecked(&self, bits: &[u8]) -> f64 {
        self.terms
            .iter()
            .map(|(k, &v)| {
                if k.iter().all(|&i| bits[i as usize] == 1) {
                    v
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Drop every term of degree >= 3, keeping lower degrees verbatim.
    pub fn truncate_to_quadratic(&self) -> BinaryPolynomial {
        let mut out = BinaryPolynomial::new(self.num_vars);
        for (k, &v) in &self.terms {
            if k.len() <= 2 {
                out.terms.insert(k.clone(), v);
            }
        }
        out
    }

    /// Largest coefficient magnitude over non-constant terms.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(k, _)| !k.is_empty())
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max)
    }

    /// Smallest nonzero coefficient magnitude over non-constant terms.
    pub fn min_abs_coeff(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(k, _)| !k.is_empty())
            .map(|(_, v)| v.abs())
            .fold(f64::INFINITY, f64::min)
    }
}
