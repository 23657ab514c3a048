//! CVaR-VQE driver: derivative-free simplex minimization of the sampled
//! conditional value-at-risk energy, retaining every sampled bitstring.

use crate::error::{Error, Result};
use crate::quantum::ansatz::{simulate_ansatz, AnsatzConfig};
use crate::quantum::pauli::{mask_to_bits, PauliHamiltonian};
use crate::solvers::{SampleRecord, SampleSet};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    pub shots: usize,
    pub cvar_alpha: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Initial simplex spread (radians).
    pub initial_step: f64,
}

impl VqeConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            shots: 4000,
            cvar_alpha: 0.1,
            max_iterations: 500,
            seed,
            initial_step: 0.5,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.cvar_alpha > 0.0 && self.cvar_alpha <= 1.0) {
            return Err(Error::BadSchedule(format!(
                "cvar alpha must be in (0,1], got {}",
                self.cvar_alpha
            )));
        }
        if self.shots == 0 || self.max_iterations == 0 {
            return Err(Error::BadSchedule(
                "shots and max_iterations must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Draw basis-state indices from |amplitude|².
fn sample_indices(state: &[Complex64], shots: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut cumulative = Vec::with_capacity(state.len());
    let mut acc = 0.0;
    for amp in state {
        acc += amp.norm_sqr();
        cumulative.push(acc);
    }
    let total = acc;
    (0..shots)
        .map(|_| {
            let u = rng.gen::<f64>() * total;
            match cumulative.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
                Ok(i) | Err(i) => i.min(state.len() - 1) as u64,
            }
        })
        .collect()
}

/// Mean of the lowest ⌈alpha·n⌉ values.
fn cvar_of(energies: &mut [f64], alpha: f64) -> f64 {
    energies.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = ((alpha * energies.len() as f64).ceil() as usize)
        .clamp(1, energies.len());
    energies[..m].iter().sum::<f64>() / m as f64
}

/// Sample `shots` basis states from the state, evaluate their diagonal
/// energies, and average the lowest alpha fraction. Deterministic given
/// the seed; alpha = 1 reduces to the plain sample mean.
pub fn cvar_energy(
    h: &PauliHamiltonian,
    state: &[Complex64],
    shots: usize,
    alpha: f64,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = sample_indices(state, shots, &mut rng);
    let mut energies: Vec<f64> = samples.iter().map(|&s| h.diagonal_energy(s)).collect();
    cvar_of(&mut energies, alpha)
}

#[derive(Debug, Clone)]
pub struct VqeOutcome {
    pub best_params: Vec<f64>,
    pub best_energy: f64,
    /// Best simplex energy at each optimizer iteration.
    pub trace: Vec<f64>,
    /// Every bitstring sampled across all evaluations, with counts and
    /// exact diagonal energies.
    pub samples: SampleSet,
}

/// Minimize ⟨ψ_θ|H|ψ_θ⟩ via CVaR over sampled energies with a
/// Nelder-Mead simplex. `initial` resumes from given parameters;
/// otherwise parameters start uniform in [-π, π).
pub fn vqe_minimize(
    h: &PauliHamiltonian,
    ansatz: &AnsatzConfig,
    cfg: &VqeConfig,
    initial: Option<&[f64]>,
) -> Result<VqeOutcome> {
    cfg.validate()?;
    if ansatz.num_qubits != h.num_qubits {
        return Err(Error::VarCountMismatch(h.num_qubits, ansatz.num_qubits));
    }
    let dim = ansatz.num_parameters();
    let x0: Vec<f64> = match initial {
        Some(p) => {
            if p.len() != dim {
                return Err(Error::ParamCount {
                    expected: dim,
                    actual: p.len(),
                });
            }
            p.to_vec()
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..dim)
                .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect()
        }
    };

    let mut eval_counter: u64 = 0;
    let mut energy_cache: HashMap<u64, f64> = HashMap::new();
    let mut tally: BTreeMap<u64, u64> = BTreeMap::new();

    let mut objective = |theta: &[f64]| -> Result<f64> {
        let state = simulate_ansatz(ansatz, theta)?;
        let eval_seed = cfg.seed.wrapping_add(eval_counter.wrapping_mul(0x9e3779b97f4a7c15));
        eval_counter += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(eval_seed);
        let samples = sample_indices(&state, cfg.shots, &mut rng);
        let mut energies = Vec::with_capacity(samples.len());
        for &s in &samples {
            let e = *energy_cache
                .entry(s)
                .or_insert_with(|| h.diagonal_energy(s));
            energies.push(e);
            *tally.entry(s).or_insert(0) += 1;
        }
        let value = cvar_of(&mut energies, cfg.cvar_alpha);
        if !value.is_finite() {
            return Err(Error::NonFiniteEnergy);
        }
        Ok(value)
    };

    let (best_params, best_energy, trace) =
        nelder_mead(&mut objective, &x0, cfg.initial_step, cfg.max_iterations)?;

    let records: Vec<SampleRecord> = tally
        .into_iter()
        .map(|(mask, count)| SampleRecord {
            bits: mask_to_bits(mask, h.num_qubits),
            energy: energy_cache[&mask],
            count,
            source: "vqe".into(),
        })
        .collect();

    Ok(VqeOutcome {
        best_params,
        best_energy,
        trace,
        samples: SampleSet::from_records(records),
    })
}

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5). Returns the best vertex, its value, and the best value
/// recorded at every iteration.
fn nelder_mead<F>(
    f: &mut F,
    x0: &[f64],
    step: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, f64, Vec<f64>)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let dim = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = f(x0)?;
    simplex.push((x0.to_vec(), v0));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = f(&x)?;
        simplex.push((x, v));
    }

    let mut trace = Vec::with_capacity(max_iter);
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        trace.push(simplex[0].1);

        let spread = simplex[dim].1 - simplex[0].1;
        if spread.abs() < 1e-12 {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|(x, _)| x[k]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let combine = |a: f64| -> Vec<f64> {
            (0..dim)
                .map(|k| centroid[k] + a * (centroid[k] - worst.0[k]))
                .collect()
        };

        let reflected = combine(1.0);
        let v_r = f(&reflected)?;
        if v_r < simplex[0].1 {
            let expanded = combine(2.0);
            let v_e = f(&expanded)?;
            simplex[dim] = if v_e < v_r {
                (expanded, v_e)
            } else {
                (reflected, v_r)
            };
        } else if v_r < simplex[dim - 1].1 {
            simplex[dim] = (reflected, v_r);
        } else {
            let contracted = if v_r < worst.1 {
                combine(0.5)
            } else {
                combine(-0.5)
            };
            let v_c = f(&contracted)?;
            if v_c < worst.1.min(v_r) {
                simplex[dim] = (contracted, v_c);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    for k in 0..dim {
                        vertex.0[k] = best[k] + 0.5 * (vertex.0[k] - best[k]);
                    }
                    vertex.1 = f(&vertex.0)?;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    Ok((simplex[0].0.clone(), simplex[0].1, trace))
}
