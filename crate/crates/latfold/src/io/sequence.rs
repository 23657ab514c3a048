//! One-letter peptide sequence parsing.

use crate::error::{Error, Result};
use crate::mj::residue_index;

/// Normalize (strip whitespace, uppercase) and validate against the 20
/// standard one-letter codes. Position in the error is 1-based over the
/// normalized sequence.
pub fn parse_sequence(text: &str) -> Result<Vec<char>> {
    let mut residues = Vec::new();
    for c in text.chars().filter(|c| !c.is_whitespace()) {
        let upper = c.to_ascii_uppercase();
        if residue_index(upper).is_none() {
            return Err(Error::UnknownResidue(upper, Some(residues.len() + 1)));
        }
        residues.push(upper);
    }
    if residues.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(residues)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes() {
        assert_eq!(parse_sequence("GGYMLG").unwrap().len(), 6);
        assert_eq!(
            parse_sequence("gGy mlg").unwrap(),
            vec!['G', 'G', 'Y', 'M', 'L', 'G']
        );
        assert_eq!(
            parse_sequence("DRVYIHPFHL").unwrap().len(),
            10
        );
    }

    #[test]
    fn rejects_empty_and_unknown() {
        assert!(matches!(parse_sequence(""), Err(Error::EmptySequence)));
        assert!(matches!(parse_sequence("   "), Err(Error::EmptySequence)));
        assert!(matches!(
            parse_sequence("GGX"),
            Err(Error::UnknownResidue('X', Some(3)))
        ));
        // B, J, O, U, Z are not standard codes.
        assert!(parse_sequence("GB").is_err());
    }
}
