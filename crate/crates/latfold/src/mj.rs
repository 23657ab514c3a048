//! Miyazawa-Jernigan style contact-energy tables.
//!
//! The real MJ numbers are user-supplied (see the CSV schema in the
//! README); this crate ships only a clearly synthetic table for tests and
//! demos. Tables are symmetric 20x20 over the standard one-letter codes,
//! negative entries meaning attraction.

use crate::error::{Error, Result};

/// The 20 standard residues in the canonical order used by this crate.
pub const RESIDUES: [char; 20] = [
    'A', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'K', 'L', 'M', 'N', 'P', 'Q', 'R', 'S', 'T', 'V',
    'W', 'Y',
];

/// Index of a one-letter code in [`RESIDUES`].
pub fn residue_index(code: char) -> Option<usize> {
    RESIDUES.iter().position(|&r| r == code)
}

/// Symmetric 20x20 contact-energy table (dimensionless).
#[derive(Debug, Clone, PartialEq)]
pub struct MjTable {
    values: [[f64; 20]; 20],
}

impl MjTable {
    /// Symmetry slack tolerated when loading a full matrix.
    pub const SYMMETRY_TOL: f64 = 1e-9;

    pub fn get(&self, a: char, b: char) -> Result<f64> {
        let ia = residue_index(a).ok_or(Error::UnknownResidue(a, None))?;
        let ib = residue_index(b).ok_or(Error::UnknownResidue(b, None))?;
        Ok(self.values[ia][ib])
    }

    pub fn get_by_index(&self, a: usize, b: usize) -> f64 {
        self.values[a][b]
    }

    /// Every pair set to the same value. Handy for calibration tests.
    pub fn uniform(value: f64) -> Self {
        Self {
            values: [[value; 20]; 20],
        }
    }

    /// Deterministic synthetic table: entry (i,j) is
    /// `-(0.4 + 0.1 * ((i+1)(j+1) mod 11))`, symmetric by construction and
    /// all-attractive. The values carry no biophysical meaning.
    pub fn synthetic() -> Self {
        let mut values = [[0.0; 20]; 20];
        for (i, row) in values.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = -(0.4 + 0.1 * (((i + 1) * (j + 1)) % 11) as f64);
            }
        }
        Self { values }
    }

    /// Parse the CSV schema: one header row of codes, one header column of
    /// codes, body either a full symmetric matrix or a lower-triangular one
    /// (blank upper cells), mirrored on load. Codes may appear in any
    /// order but all 20 must be present exactly once.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::MjFormat("empty file".into()))?;
        let col_codes = parse_code_row(header)?;
        ensure_complete(&col_codes)?;

        let mut seen_rows: Vec<char> = Vec::new();
        let mut cells: Vec<Vec<Option<f64>>> = Vec::new();
        for line in lines {
            let mut fields = line.split(',').map(str::trim);
            let row_code = parse_code(fields.next().unwrap_or(""))?;
            let mut row = Vec::with_capacity(20);
            for (k, field) in fields.enumerate() {
                if k >= 20 {
                    return Err(Error::MjFormat(format!(
                        "row '{row_code}' has more than 20 value columns"
                    )));
                }
                if field.is_empty() {
                    row.push(None);
                } else {
                    let v: f64 = field.parse().map_err(|_| {
                        Error::MjBadCell(row_code, col_codes[k], field.to_string())
                    })?;
                    row.push(Some(v));
                }
            }
            row.resize(20, None);
            seen_rows.push(row_code);
            cells.push(row);
        }
        ensure_complete(&seen_rows)?;

        let mut values = [[f64::NAN; 20]; 20];
        for (r, row_code) in seen_rows.iter().enumerate() {
            let ri = residue_index(*row_code).unwrap();
            for (c, cell) in cells[r].iter().enumerate() {
                if let Some(v) = cell {
                    let ci = residue_index(col_codes[c]).unwrap();
                    if values[ri][ci].is_nan() {
                        values[ri][ci] = *v;
                    } else if (values[ri][ci] - v).abs() > Self::SYMMETRY_TOL {
                        return Err(Error::MjAsymmetric(
                            *row_code,
                            col_codes[c],
                            values[ci][ri],
                            *v,
                        ));
                    }
                    if values[ci][ri].is_nan() {
                        values[ci][ri] = *v;
                    } else if (values[ci][ri] - v).abs() > Self::SYMMETRY_TOL {
                        return Err(Error::MjAsymmetric(*row_code, col_codes[c], *v, values[ci][ri]));
                    }
                }
            }
        }
        for (i, row) in values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_nan() {
                    return Err(Error::MjFormat(format!(
                        "no value for pair ({},{})",
                        RESIDUES[i], RESIDUES[j]
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    /// Serialize as a full-matrix CSV in canonical residue order.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(" ,");
        out.push_str(&RESIDUES.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
        out.push('\n');
        for (i, code) in RESIDUES.iter().enumerate() {
            out.push(*code);
            for j in 0..20 {
                out.push(',');
                out.push_str(&format!("{}", self.values[i][j]));
            }
            out.push('\n');
        }
        out
    }
}

fn parse_code(field: &str) -> Result<char> {
    let mut chars = field.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if residue_index(c.to_ascii_uppercase()).is_some() => {
            Ok(c.to_ascii_uppercase())
        }
        _ => Err(Error::MjFormat(format!("'{field}' is not a residue code"))),
    }
}

fn parse_code_row(header: &str) -> Result<Vec<char>> {
    header
        .split(',')
        .map(str::trim)
        .skip(1) // corner cell above the row-code column
        .filter(|f| !f.is_empty())
        .map(parse_code)
        .collect()
}

fn ensure_complete(codes: &[char]) -> Result<()> {
    for &r in &RESIDUES {
        match codes.iter().filter(|&&c| c == r).count() {
            0 => return Err(Error::MjMissingResidue(r)),
            1 => {}
            _ => return Err(Error::MjFormat(format!("residue '{r}' listed twice"))),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_is_symmetric_and_negative() {
        let t = MjTable::synthetic();
        for i in 0..20 {
            for j in 0..20 {
                assert_eq!(t.get_by_index(i, j), t.get_by_index(j, i));
                assert!(t.get_by_index(i, j) < 0.0);
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = MjTable::synthetic();
        let parsed = MjTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(parsed, t);
    }

    #[test]
    fn lower_triangular_mirrors() {
        let t = MjTable::synthetic();
        let mut csv = String::from(" ,");
        csv.push_str(&RESIDUES.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
        csv.push('\n');
        for (i, code) in RESIDUES.iter().enumerate() {
            csv.push(*code);
            for j in 0..20 {
                csv.push(',');
                if j <= i {
                    csv.push_str(&format!("{}", t.get_by_index(i, j)));
                }
            }
            csv.push('\n');
        }
        let parsed = MjTable::from_csv(&csv).unwrap();
        assert_eq!(parsed, t);
    }

    #[test]
    fn missing_residue_named() {
        let t = MjTable::synthetic();
        let csv = t.to_csv();
        // Drop the tryptophan row entirely.
        let without: String = csv.lines().filter(|l| !l.starts_with('W')).collect::<Vec<_>>().join("\n");
        match MjTable::from_csv(&without) {
            Err(Error::MjMissingResidue('W')) => {}
            other => panic!("expected missing-W error, got {other:?}"),
        }
    }

    #[test]
    fn asymmetry_rejected() {
        let t = MjTable::synthetic();
        let mut csv = t.to_csv();
        // Corrupt one off-diagonal cell: first data row, column C.
        let target = format!("A,{}", t.get_by_index(0, 0));
        assert!(csv.contains(&target));
        let bad_row = csv
            .lines()
            .find(|l| l.starts_with('A'))
            .unwrap()
            .to_string();
        let mut fields: Vec<String> = bad_row.split(',').map(String::from).collect();
        fields[2] = "99.0".to_string();
        csv = csv.replace(&bad_row, &fields.join(","));
        assert!(matches!(MjTable::from_csv(&csv), Err(Error::MjAsymmetric(..))));
    }

    #[test]
    fn non_numeric_cell_rejected() {
        let t = MjTable::synthetic();
        let csv = t.to_csv().replacen("-0.5", "oops", 1);
        assert!(matches!(MjTable::from_csv(&csv), Err(Error::MjBadCell(..))));
    }
}
