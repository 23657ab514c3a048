//! Coarse-grained peptide backbone prediction on a face-centred cubic lattice.
//!
//! The chain is encoded turn by turn: each bead-to-bead move is selected by
//! five binary variables (three turn bits, two plane bits), so an N-bead
//! peptide needs 5(N-1) variables. Folding is posed as minimization of a
//! higher-order binary polynomial combining Miyazawa-Jernigan pair weights
//! with continuity, overlap, and bond-crossing constraints. The polynomial
//! can be solved by simulated annealing, exhaustive search, or a CVaR-VQE
//! on a dense statevector simulator, and decoded structures are scored
//! against experimental references (RMSD, radius of gyration, contact
//! energy, 2D free-energy surfaces).
//!
//! Bit convention used everywhere: variable 0 is the leftmost character of
//! a bitstring, and turn `t` occupies characters `5t..5t+5` in the order
//! `(q1, q2, q3, q4, q5)`.

pub mod analysis;
pub mod error;
pub mod hamiltonian;
pub mod io;
pub mod lattice;
pub mod mj;
pub mod poly;
pub mod quantum;
pub mod solvers;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use lattice::{decode_conformation, decode_turn, LatticeConformation};
pub use poly::BinaryPolynomial;
