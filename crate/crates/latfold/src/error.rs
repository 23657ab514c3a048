//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bitstring has {actual} bits but {expected} were expected ({beads} beads need 5(N-1))")]
    BitLength {
        expected: usize,
        actual: usize,
        beads: usize,
    },

    #[error("bead count must be at least 2, got {0}")]
    TooFewBeads(usize),

    #[error("turn index {index} out of range for {beads} beads (valid 0..{})", beads - 1)]
    TurnIndexOutOfRange { index: usize, beads: usize },

    #[error("bit length {actual} does not match polynomial variable count {expected}")]
    EvalLength { expected: usize, actual: usize },

    #[error("polynomials disagree on variable count: {0} vs {1}")]
    VarCountMismatch(usize, usize),

    #[error("residue '{0}' is not one of the 20 standard one-letter codes{}", match .1 { Some(p) => format!(" (position {p})"), None => String::new() })]
    UnknownResidue(char, Option<usize>),

    #[error("sequence is empty")]
    EmptySequence,

    #[error("MJ table is missing residue '{0}'")]
    MjMissingResidue(char),

    #[error("MJ table asymmetric at ({0},{1}): {2} vs {3}")]
    MjAsymmetric(char, char, f64, f64),

    #[error("MJ table cell ({0},{1}) is not numeric: '{2}'")]
    MjBadCell(char, char, String),

    #[error("malformed MJ table: {0}")]
    MjFormat(String),

    #[error("no axis selector recorded for pair ({0},{1})")]
    MissingSelector(usize, usize),

    #[error("sum of pair weights is zero; pass explicit lambda overrides (--lambda1/--lambda2/--lambda3)")]
    ZeroObjectiveWeight,

    #[error("annealing schedule invalid: {0}")]
    BadSchedule(String),

    #[error("brute force refused: {vars} variables exceed the cap of {cap}")]
    BruteForceCap { vars: usize, cap: usize },

    #[error("polynomial has no terms to optimize")]
    EmptyPolynomial,

    #[error("{vars} variables exceed the {cap}-qubit Pauli mask limit")]
    PauliWidth { vars: usize, cap: usize },

    #[error("{qubits} qubits exceed the dense statevector cap of {cap}")]
    QubitCap { qubits: usize, cap: usize },

    #[error("parameter vector has length {actual}, ansatz needs {expected}")]
    ParamCount { expected: usize, actual: usize },

    #[error("non-finite energy encountered during optimization")]
    NonFiniteEnergy,

    #[error("structure has zero-displacement turn {0}; cannot rescale to angstroms")]
    DegenerateTurn(usize),

    #[error("structures have {0} and {1} beads; counts must match and be >= 3")]
    StructureSizeMismatch(usize, usize),

    #[error("repair rejected: {0}")]
    RepairRejected(String),

    #[error("no samples to histogram")]
    EmptyFes,

    #[error("PDB parse: {0}")]
    Pdb(String),

    #[error("sample file parse (line {line}): {reason}")]
    SampleFile { line: usize, reason: String },

    #[error("polynomial file parse (line {line}): {reason}")]
    HuboFile { line: usize, reason: String },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for refusals caused by hard capability limits (qubit/variable
    /// caps) rather than malformed data.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            Error::BruteForceCap { .. } | Error::PauliWidth { .. } | Error::QubitCap { .. }
        )
    }
}
