//! Sample file format: `bitstring count energy` lines with `#` header
//! comments. Qubit 0 is the leftmost character; turn t occupies characters
//! 5t..5t+5 in (q1,q2,q3,q4,q5) order. Energies round-trip exactly via
//! shortest-representation f64 formatting.

use crate::error::{Error, Result};
use crate::solvers::{SampleRecord, SampleSet};

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Option<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(0u8),
            '1' => Some(1u8),
            _ => None,
        })
        .collect()
}

/// Render a sample set with optional manifest digest and source header.
pub fn write_samples(set: &SampleSet, manifest_digest: Option<&str>, source: &str) -> String {
    let mut out = String::new();
    out.push_str("# latfold samples\n");
    if let Some(d) = manifest_digest {
        out.push_str(&format!("# manifest {d}\n"));
    }
    out.push_str(&format!("# source {source}\n"));
    out.push_str("# bitstring count energy\n");
    for r in &set.records {
        out.push_str(&format!("{} {} {}\n", format_bits(&r.bits), r.count, r.energy));
    }
    out
}

/// Parse a sample file; returns the set and the manifest digest if the
/// header carried one.
pub fn read_samples(text: &str) -> Result<(SampleSet, Option<String>)> {
    let mut digest = None;
    let mut source = "unknown".to_string();
    let mut records = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(d) = rest.strip_prefix("manifest ") {
                digest = Some(d.trim().to_string());
            } else if let Some(s) = rest.strip_prefix("source ") {
                source = s.trim().to_string();
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let bits_str = parts.next().ok_or(Error::SampleFile {
            line: lineno,
            reason: "missing bitstring".into(),
        })?;
        let bits = parse_bits(bits_str).ok_or(Error::SampleFile {
            line: lineno,
            reason: format!("'{bits_str}' is not a bitstring"),
        })?;
        match width {
            None => width = Some(bits.len()),
            Some(w) if w != bits.len() => {
                return Err(Error::SampleFile {
                    line: lineno,
                    reason: format!("bitstring length {} differs from {w}", bits.len()),
                })
            }
            _ => {}
        }
        let count: u64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .filter(|&c| c >= 1)
            .ok_or(Error::SampleFile {
                line: lineno,
                reason: "count must be a positive integer".into(),
            })?;
        let energy: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::SampleFile {
                line: lineno,
                reason: "missing or non-numeric energy".into(),
            })?;
        records.push(SampleRecord {
            bits,
            energy,
            count,
            source: source.clone(),
        });
    }
    Ok((SampleSet::from_records(records), digest))
}
