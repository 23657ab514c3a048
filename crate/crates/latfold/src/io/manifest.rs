//! Run manifest: the reproducibility envelope tying every stage's inputs,
//! seeds, and derived quantities together.

use crate::error::{Error, Result};
use crate::hamiltonian::{ContinuityMode, MjSign, PenaltyFactors};
use crate::lattice;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub selectors: u64,
    pub sa: u64,
    pub vqe: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub sequence: String,
    pub n_beads: usize,
    /// Variable count = qubit count = 5(N-1).
    pub num_vars: usize,
    pub mj_source: String,
    pub mj_digest: String,
    pub mj_sign: MjSign,
    pub continuity: ContinuityMode,
    pub quadratic: bool,
    pub seeds: Seeds,
    pub lambdas: PenaltyFactors,
}

impl RunManifest {
    pub fn validate(&self) -> Result<()> {
        if self.n_beads < 2 {
            return Err(Error::Manifest(format!(
                "{} beads is below the 2-bead minimum",
                self.n_beads
            )));
        }
        if self.num_vars != lattice::num_vars(self.n_beads) {
            return Err(Error::Manifest(format!(
                "num_vars {} does not equal 5(N-1) = {}",
                self.num_vars,
                lattice::num_vars(self.n_beads)
            )));
        }
        if self.sequence.chars().count() != self.n_beads {
            return Err(Error::Manifest("sequence length and n_beads disagree".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn digest(&self) -> Result<String> {
        Ok(super::digest_bytes(serde_json::to_string(self)?.as_bytes()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let manifest: RunManifest = serde_json::from_str(&text)?;
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        super::write_atomic(path, &self.to_json()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunManifest {
        RunManifest {
            tool_version: "0.1.0".into(),
            sequence: "GGYMLG".into(),
            n_beads: 6,
            num_vars: 25,
            mj_source: "synthetic".into(),
            mj_digest: "d".repeat(64),
            mj_sign: MjSign::Negated,
            continuity: ContinuityMode::Literal,
            quadratic: false,
            seeds: Seeds {
                selectors: 1,
                sa: 2,
                vqe: 3,
            },
            lambdas: PenaltyFactors {
                lambda0: 1.0,
                lambda1: 1.0,
                lambda2: 1.0,
                lambda3: 0.5,
                c_obj: 10.0,
                c_continuity: 5.0,
                c_overlap: 10.0,
            },
        }
    }

    #[test]
    fn json_round_trip_and_digest_stability() {
        let m = sample();
        m.validate().unwrap();
        let json = m.to_json().unwrap();
        let back: RunManifest = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.digest().unwrap(), back.digest().unwrap());
    }

    #[test]
    fn qubit_invariant_enforced() {
        let mut m = sample();
        m.num_vars = 24;
        assert!(matches!(m.validate(), Err(Error::Manifest(_))));
    }
}
