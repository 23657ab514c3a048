//! Quantum route: Pauli-Z Hamiltonians and a CVaR-VQE on a dense
//! statevector simulator.

pub mod ansatz;
pub mod pauli;
pub mod vqe;

pub use ansatz::{simulate_ansatz, AnsatzConfig, Entanglement, MAX_DENSE_QUBITS};
pub use pauli::{pauli_term_count, to_pauli, PauliHamiltonian};
pub use vqe::{cvar_energy, vqe_minimize, VqeConfig, VqeOutcome};
