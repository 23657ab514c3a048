//! File formats and parsers: sequences, MJ tables, PDB Cα extraction,
//! sample files, polynomial files, and the run manifest.

pub mod hubo;
pub mod manifest;
pub mod pdb;
pub mod samples;
pub mod sequence;

pub use manifest::RunManifest;
pub use pdb::parse_pdb_ca;
pub use sequence::parse_sequence;

use crate::error::Result;
use crate::mj::MjTable;
use std::path::Path;

/// Load an MJ table from a CSV file (full or lower-triangular schema).
pub fn parse_mj_table(path: &Path) -> Result<MjTable> {
    let text = std::fs::read_to_string(path)?;
    MjTable::from_csv(&text)
}

/// Hex SHA-256 of a byte slice, used to pin input files in manifests.
pub fn digest_bytes(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Write a file atomically (temp file + rename) so partial stage output
/// never masquerades as complete.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
