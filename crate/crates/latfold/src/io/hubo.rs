//! Text formats for polynomials and Pauli Hamiltonians.
//!
//! Polynomial lines are `<coeff> <i> <j> ...` (no indices for the
//! constant); coefficients use shortest round-trip formatting, so
//! write-read is bit-exact and rebuilding from a manifest reproduces a
//! byte-identical file.

use crate::error::{Error, Result};
use crate::poly::BinaryPolynomial;
use crate::quantum::PauliHamiltonian;

pub fn write_poly(poly: &BinaryPolynomial) -> String {
    let mut out = String::new();
    out.push_str("# latfold hubo\n");
    out.push_str(&format!("# vars {}\n", poly.num_vars()));
    for (indices, coeff) in poly.iter_terms() {
        out.push_str(&format!("{coeff}"));
        for i in indices {
            out.push_str(&format!(" {i}"));
        }
        out.push('\n');
    }
    out
}

pub fn read_poly(text: &str) -> Result<BinaryPolynomial> {
    let mut num_vars: Option<usize> = None;
    let mut terms: Vec<(Vec<usize>, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("vars ") {
                num_vars = Some(v.trim().parse().map_err(|_| Error::HuboFile {
                    line: lineno,
                    reason: "bad vars header".into(),
                })?);
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let coeff: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::HuboFile {
                line: lineno,
                reason: "missing coefficient".into(),
            })?;
        let indices: Vec<usize> = parts
            .map(|s| {
                s.parse().map_err(|_| Error::HuboFile {
                    line: lineno,
                    reason: format!("bad variable index '{s}'"),
                })
            })
            .collect::<Result<_>>()?;
        terms.push((indices, coeff));
    }
    let num_vars = num_vars.ok_or(Error::HuboFile {
        line: 0,
        reason: "missing '# vars N' header".into(),
    })?;
    let mut poly = BinaryPolynomial::new(num_vars);
    for (indices, coeff) in terms {
        if let Some(&bad) = indices.iter().find(|&&i| i >= num_vars) {
            return Err(Error::HuboFile {
                line: 0,
                reason: format!("index {bad} out of range for {num_vars} vars"),
            });
        }
        poly.add_term(&indices, coeff);
    }
    Ok(poly)
}

/// One Pauli term per line: `±c Z<i>Z<j>…` or `±c I`.
pub fn write_pauli(h: &PauliHamiltonian) -> String {
    let mut out = String::new();
    out.push_str(&format!("# latfold pauli, {} qubits\n", h.num_qubits));
    for &(mask, coeff) in &h.terms {
        out.push_str(&PauliHamiltonian::format_term(mask, coeff));
        out.push('\n');
    }
    out
}
