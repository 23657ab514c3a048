//! Layered hardware-efficient ansatz on a dense statevector.
//!
//! Each layer applies RY then RZ to every qubit followed by a CX entangler
//! chain; a final rotation layer closes the circuit, giving
//! `num_qubits * (layers + 1) * 2` parameters. Qubit i is bit i of the
//! state index.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Dense simulation cap.
pub const MAX_DENSE_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Entanglement {
    #[default]
    Linear,
    Circular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzConfig {
    pub num_qubits: usize,
    pub layers: usize,
    pub entanglement: Entanglement,
}

impl AnsatzConfig {
    pub fn new(num_qubits: usize, layers: usize, entanglement: Entanglement) -> Self {
        Self {
            num_qubits,
            layers,
            entanglement,
        }
    }

    /// Two rotation angles per qubit per layer, plus the final layer.
    pub fn num_parameters(&self) -> usize {
        self.num_qubits * (self.layers + 1) * 2
    }
}

fn apply_ry(state: &mut [Complex64], qubit: usize, theta: f64) {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let bit = 1usize << qubit;
    for i in 0..state.len() {
        if i & bit == 0 {
            let j = i | bit;
            let a = state[i];
            let b = state[j];
            state[i] = c * a - s * b;
            state[j] = s * a + c * b;
        }
    }
}

fn apply_rz(state: &mut [Complex64], qubit: usize, theta: f64) {
    let phase0 = Complex64::from_polar(1.0, -theta / 2.0);
    let phase1 = Complex64::from_polar(1.0, theta / 2.0);
    let bit = 1usize << qubit;
    for (i, amp) in state.iter_mut().enumerate() {
        *amp *= if i & bit == 0 { phase0 } else { phase1 };
    }
}

fn apply_cx(state: &mut [Complex64], control: usize, target: usize) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    for i in 0..state.len() {
        if i & cbit != 0 && i & tbit == 0 {
            state.swap(i, i | tbit);
        }
    }
}

/// Run the circuit on |0…0⟩ and return the final state.
pub fn simulate_ansatz(config: &AnsatzConfig, theta: &[f64]) -> Result<Vec<Complex64>> {
    let n = config.num_qubits;
    if n > MAX_DENSE_QUBITS {
        return Err(Error::QubitCap {
            qubits: n,
            cap: MAX_DENSE_QUBITS,
        });
    }
    let expected = config.num_parameters();
    if theta.len() != expected {
        return Err(Error::ParamCount {
            expected,
            actual: theta.len(),
        });
    }
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << n];
    state[0] = Complex64::new(1.0, 0.0);

    let mut params = theta.iter();
    let rotation_layer = |state: &mut [Complex64], params: &mut std::slice::Iter<f64>| {
        for q in 0..n {
            apply_ry(state, q, *params.next().unwrap());
            apply_rz(state, q, *params.next().unwrap());
        }
    };
    for _ in 0..config.layers {
        rotation_layer(&mut state, &mut params);
        if n > 1 {
            for q in 0..n - 1 {
                apply_cx(&mut state, q, q + 1);
            }
            if config.entanglement == Entanglement::Circular {
                apply_cx(&mut state, n - 1, 0);
            }
        }
    }
    rotation_layer(&mut state, &mut params);
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_angles_give_ground_state() {
        let cfg = AnsatzConfig::new(3, 2, Entanglement::Linear);
        let theta = vec![0.0; cfg.num_parameters()];
        let state = simulate_ansatz(&cfg, &theta).unwrap();
        assert!((state[0].norm() - 1.0).abs() < 1e-12);
        for amp in &state[1..] {
            assert!(amp.norm() < 1e-12);
        }
    }

    #[test]
    fn random_angles_stay_normalized() {
        use rand::Rng;
        let cfg = AnsatzConfig::new(4, 3, Entanglement::Circular);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let theta: Vec<f64> = (0..cfg.num_parameters())
            .map(|_| rng.gen_range(-3.2..3.2))
            .collect();
        let state = simulate_ansatz(&cfg, &theta).unwrap();
        let norm: f64 = state.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pi_rotation_flips_single_qubit() {
        let cfg = AnsatzConfig::new(1, 0, Entanglement::Linear);
        let state = simulate_ansatz(&cfg, &[std::f64::consts::PI, 0.0]).unwrap();
        assert!((state[1].norm() - 1.0).abs() < 1e-12);
        assert!(state[0].norm() < 1e-12);
    }

    #[test]
    fn caps_and_param_counts() {
        let cfg = AnsatzConfig::new(21, 1, Entanglement::Linear);
        assert!(matches!(
            simulate_ansatz(&cfg, &[]),
            Err(Error::QubitCap { qubits: 21, cap: 20 })
        ));
        let cfg = AnsatzConfig::new(2, 1, Entanglement::Linear);
        assert_eq!(cfg.num_parameters(), 8);
        assert!(matches!(
            simulate_ansatz(&cfg, &[0.0; 7]),
            Err(Error::ParamCount { expected: 8, actual: 7 })
        ));
    }
}
