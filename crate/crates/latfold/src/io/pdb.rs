//! Cα extraction from PDB-format text.
//!
//! Fixed-column parsing of ATOM records: atom name "CA", alternate
//! location blank or 'A', coordinates from columns 31-54. One model and
//! one chain are selected (defaults: the first of each encountered), and
//! residue numbering must be contiguous -- the predicted beads align to
//! experimental residues positionally, so gaps are rejected rather than
//! reconciled.

use crate::analysis::CartesianStructure;
use crate::error::{Error, Result};

/// Parse Cα coordinates from PDB text.
pub fn parse_pdb_ca(
    text: &str,
    chain: Option<char>,
    model: Option<usize>,
) -> Result<CartesianStructure> {
    let mut model_counter = 0usize;
    let mut current_model: Option<usize> = None; // None outside MODEL/ENDMDL
    let mut first_model: Option<usize> = None;
    let mut selected_chain = chain;
    let mut atoms: Vec<(i64, [f64; 3])> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let record = field(line, 0, 6);
        match record.trim() {
            "MODEL" => {
                model_counter += 1;
                let serial = field(line, 6, 80).trim().parse().unwrap_or(model_counter);
                current_model = Some(serial);
                first_model.get_or_insert(serial);
            }
            "ENDMDL" => current_model = None,
            "ATOM" => {
                let in_model = match (first_model, model) {
                    (None, None) => true,
                    (None, Some(m)) => m == 1, // implicit single model
                    (Some(first), None) => current_model == Some(first),
                    (Some(_), Some(m)) => current_model == Some(m),
                };
                if !in_model {
                    continue;
                }
                if field(line, 12, 16).trim() != "CA" {
                    continue;
                }
                let altloc = field(line, 16, 17).chars().next().unwrap_or(' ');
                if altloc != ' ' && altloc != 'A' {
                    continue;
                }
                let chain_id = field(line, 21, 22).chars().next().unwrap_or(' ');
                match selected_chain {
                    None => selected_chain = Some(chain_id),
                    Some(c) if c != chain_id => continue,
                    _ => {}
                }
                let resseq: i64 = field(line, 22, 26).trim().parse().map_err(|_| {
                    Error::Pdb(format!("line {lineno}: bad residue number"))
                })?;
                let coord = |a: usize, b: usize, axis: &str| -> Result<f64> {
                    field(line, a, b).trim().parse().map_err(|_| {
                        Error::Pdb(format!("line {lineno}: malformed {axis} coordinate"))
                    })
                };
                atoms.push((
                    resseq,
                    [
                        coord(30, 38, "x")?,
                        coord(38, 46, "y")?,
                        coord(46, 54, "z")?,
                    ],
                ));
            }
            _ => {}
        }
    }

    if atoms.is_empty() {
        return Err(Error::Pdb("no CA atoms found".into()));
    }
    atoms.sort_by_key(|(resseq, _)| *resseq);
    for w in atoms.windows(2) {
        let (a, b) = (w[0].0, w[1].0);
        if b == a {
            return Err(Error::Pdb(format!("duplicate residue number {a}")));
        }
        if b != a + 1 {
            return Err(Error::Pdb(format!(
                "residue numbering gap between {a} and {b}; supply a gap-free reference"
            )));
        }
    }
    Ok(CartesianStructure {
        coords: atoms.into_iter().map(|(_, c)| c).collect(),
    })
}

fn field(line: &str, start: usize, end: usize) -> &str {
    let bytes = line.as_bytes();
    if start >= bytes.len() {
        return "";
    }
    let end = end.min(bytes.len());
    std::str::from_utf8(&bytes[start..end]).unwrap_or("")
}
