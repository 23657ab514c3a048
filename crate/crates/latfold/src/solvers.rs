//! Classical solvers: single-flip Metropolis annealing on the full
//! higher-order polynomial (or its quadratic truncation) and an exhaustive
//! brute-force oracle for small instances.

use crate::error::{Error, Result};
use crate::poly::BinaryPolynomial;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Variable-count cap for exhaustive enumeration.
pub const DEFAULT_BRUTE_CAP: usize = 25;

/// Geometric cooling schedule. Restart r uses the RNG stream seeded with
/// `seed + r`, so results are independent of execution order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub t_start: f64,
    pub t_end: f64,
    pub sweeps: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl AnnealSchedule {
    /// Scale-free defaults: t_start = 10 max|c|, t_end = 1e-3 min|c| over
    /// nonzero non-constant coefficients, 2000 sweeps, 20 restarts.
    pub fn scaled_default(poly: &BinaryPolynomial, seed: u64) -> Self {
        let hi = poly.max_abs_coeff();
        let lo = poly.min_abs_coeff();
        let (t_start, t_end) = if hi > 0.0 && lo.is_finite() {
            (10.0 * hi, 1e-3 * lo)
        } else {
            (1.0, 1e-3)
        };
        Self {
            t_start,
            t_end: t_end.min(t_start),
            sweeps: 2000,
            restarts: 20,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start >= self.t_end && self.t_end > 0.0) {
            return Err(Error::BadSchedule(format!(
                "need t_start >= t_end > 0, got {} and {}",
                self.t_start, self.t_end
            )));
        }
        if self.sweeps == 0 {
            return Err(Error::BadSchedule("sweeps must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::BadSchedule("restarts must be >= 1".into()));
        }
        Ok(())
    }
}

/// One distinct bitstring with its energy, multiplicity, and origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub bits: Vec<u8>,
    pub energy: f64,
    pub count: u64,
    pub source: String,
}

/// Deduplicated samples sorted by (energy, bitstring).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub records: Vec<SampleRecord>,
}

impl SampleSet {
    pub fn from_records(mut records: Vec<SampleRecord>) -> Self {
        records.sort_by(|a, b| {
            a.energy
                .partial_cmp(&b.energy)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.bits.cmp(&b.bits))
        });
        // Merge duplicates, summing counts.
        let mut merged: Vec<SampleRecord> = Vec::with_capacity(records.len());
        for r in records {
            match merged.last_mut() {
                Some(last) if last.bits == r.bits => last.count += r.count,
                _ => merged.push(r),
            }
        }
        Self { records: merged }
    }

    pub fn best(&self) -> Option<&SampleRecord> {
        self.records.first()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn total_count(&self) -> u64 {
        self.records.iter().map(|r| r.count).sum()
    }
}

/// Term-indexed view of a polynomial for O(deg) flip deltas.
struct FlipModel {
    constant: f64,
    terms: Vec<(Vec<u16>, f64)>,
    var_terms: Vec<Vec<u32>>,
}

impl FlipModel {
    fn new(poly: &BinaryPolynomial) -> Self {
        let mut constant = 0.0;
        let mut terms = Vec::new();
        let mut var_terms = vec![Vec::new(); poly.num_vars()];
        for (k, c) in poly.iter_terms() {
            if k.is_empty() {
                constant = c;
                continue;
            }
            let idx = terms.len() as u32;
            for &v in k {
                var_terms[v as usize].push(idx);
            }
            terms.push((k.to_vec(), c));
        }
        Self {
            constant,
            terms,
            var_terms,
        }
    }

    fn energy(&self, bits: &[u8]) -> f64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|(k, c)| {
                    if k.iter().all(|&i| bits[i as usize] == 1) {
                        *c
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
    }

    /// Energy change from flipping `var` in `bits`.
    fn flip_delta(&self, bits: &[u8], var: usize) -> f64 {
        let sign = if bits[var] == 0 { 1.0 } else { -1.0 };
        let mut delta = 0.0;
        for &t in &self.var_terms[var] {
            let (k, c) = &self.terms[t as usize];
            if k.iter().all(|&i| i as usize == var || bits[i as usize] == 1) {
                delta += c * sign;
            }
        }
        delta
    }
}

/// Best-of-restart simulated annealing. Deterministic given the schedule
/// seed; each restart contributes its best-seen bitstring.
pub fn simulated_annealing(
    poly: &BinaryPolynomial,
    schedule: &AnnealSchedule,
) -> Result<SampleSet> {
    if poly.num_vars() == 0 || poly.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    schedule.validate()?;
    let model = FlipModel::new(poly);
    let n = poly.num_vars();
    let cooling = if schedule.sweeps > 1 {
        (schedule.t_end / schedule.t_start).powf(1.0 / (schedule.sweeps - 1) as f64)
    } else {
        1.0
    };

    let mut records = Vec::with_capacity(schedule.restarts);
    for restart in 0..schedule.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed.wrapping_add(restart as u64));
        let mut bits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2u8)).collect();
        let mut energy = model.energy(&bits);
        let mut best_bits = bits.clone();
        let mut best_energy = energy;
        let mut order: Vec<usize> = (0..n).collect();
        let mut temperature = schedule.t_start;

        for _sweep in 0..schedule.sweeps {
            // Fisher-Yates with the restart RNG keeps sweeps deterministic.
            for i in (1..order.len()).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
            for &var in &order {
                let delta = model.flip_delta(&bits, var);
                if delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp() {
                    bits[var] ^= 1;
                    energy += delta;
                    #[cfg(debug_assertions)]
                    {
                        let full = model.energy(&bits);
                        debug_assert!(
                            (energy - full).abs() <= 1e-9 * (1.0 + full.abs()),
                            "incremental energy drifted: {energy} vs {full}"
                        );
                    }
                    if energy < best_energy || (energy == best_energy && bits < best_bits) {
                        best_energy = energy;
                        best_bits = bits.clone();
                    }
                }
            }
            // Resync once per sweep to keep float drift out of long runs.
            energy = model.energy(&bits);
            temperature *= cooling;
        }
        // Report via evaluate() so recorded energies are recomputable
        // bit-for-bit from the polynomial.
        records.push(SampleRecord {
            energy: poly.evaluate_unchecked(&best_bits),
            bits: best_bits,
            count: 1,
            source: "sa".into(),
        });
    }
    Ok(SampleSet::from_records(records))
}

/// Exact global minimizer by Gray-code enumeration. Ties break toward the
/// lexicographically smallest bitstring (leftmost variable first).
pub fn brute_force(poly: &BinaryPolynomial) -> Result<(Vec<u8>, f64)> {
    brute_force_with_cap(poly, DEFAULT_BRUTE_CAP)
}

pub fn brute_force_with_cap(poly: &BinaryPolynomial, cap: usize) -> Result<(Vec<u8>, f64)> {
    let n = poly.num_vars();
    if n > cap {
        return Err(Error::BruteForceCap { vars: n, cap });
    }
    if n == 0 {
        return Ok((Vec::new(), poly.evaluate(&[]).unwrap_or(0.0)));
    }
    let model = FlipModel::new(poly);
    let mut bits = vec![0u8; n];
    let mut energy = model.energy(&bits);
    let mut best_bits = bits.clone();
    let mut best_energy = energy;

    for step in 1u64..(1u64 << n) {
        let var = step.trailing_zeros() as usize;
        energy += model.flip_delta(&bits, var);
        bits[var] ^= 1;
        if energy < best_energy || (energy == best_energy && bits < best_bits) {
            // Recompute exactly at candidate minima so accumulated flip
            // deltas cannot corrupt the reported optimum.
            let exact = model.energy(&bits);
            if exact < best_energy || (exact == best_energy && bits < best_bits) {
                best_energy = exact;
                best_bits = bits.clone();
            }
            energy = exact;
        }
    }
    Ok((best_bits.clone(), poly.evaluate_unchecked(&best_bits)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_model, ContinuityMode, MjSign};
    use crate::mj::MjTable;

    #[test]
    fn brute_force_examples() {
        let mut p = BinaryPolynomial::new(1);
        p.add_term(&[0], -1.0);
        assert_eq!(brute_force(&p).unwrap(), (vec![1], -1.0));

        let mut p = BinaryPolynomial::new(2);
        p.add_term(&[0], 1.0);
        p.add_term(&[1], 1.0);
        p.add_term(&[0, 1], -3.0);
        assert_eq!(brute_force(&p).unwrap(), (vec![1, 1], -1.0));

        let flat = BinaryPolynomial::constant(30, 1.0);
        assert!(matches!(
            brute_force(&flat),
            Err(Error::BruteForceCap { vars: 30, cap: 25 })
        ));
    }

    #[test]
    fn brute_force_tie_breaks_lexicographically() {
        // Constant polynomial: every assignment ties.
        let p = BinaryPolynomial::constant(2, 0.5);
        let (bits, e) = brute_force(&p).unwrap();
        assert_eq!(bits, vec![0, 0]);
        assert_eq!(e, 0.5);
    }

    #[test]
    fn sa_trivial_and_deterministic() {
        let mut p = BinaryPolynomial::new(1);
        p.add_term(&[0], 1.0);
        let schedule = AnnealSchedule {
            t_start: 1.0,
            t_end: 0.01,
            sweeps: 50,
            restarts: 3,
            seed: 9,
        };
        let set = simulated_annealing(&p, &schedule).unwrap();
        let best = set.best().unwrap();
        assert_eq!(best.bits, vec![0]);
        assert_eq!(best.energy, 0.0);

        let again = simulated_annealing(&p, &schedule).unwrap();
        assert_eq!(set, again);

        assert!(matches!(
            simulated_annealing(
                &p,
                &AnnealSchedule {
                    t_start: 0.0,
                    ..schedule.clone()
                }
            ),
            Err(Error::BadSchedule(_))
        ));
    }

    #[test]
    fn sa_matches_brute_force_on_peptide() {
        let mj = MjTable::synthetic();
        let seq = ['G', 'Y', 'M', 'L'];
        let model =
            build_model(&seq, &mj, MjSign::Negated, ContinuityMode::Literal, 1, [None; 3]).unwrap();
        let (_, exact) = brute_force(&model.hamiltonian).unwrap();
        let schedule = AnnealSchedule::scaled_default(&model.hamiltonian, 7);
        let set = simulated_annealing(&model.hamiltonian, &schedule).unwrap();
        let best = set.best().unwrap();
        assert!(
            (best.energy - exact).abs() < 1e-9,
            "SA best {} vs brute {}",
            best.energy,
            exact
        );
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]
        /// SA can never beat the exhaustive optimum.
        #[test]
        fn sa_never_beats_brute_force(
            terms in proptest::collection::vec(
                (proptest::collection::vec(0usize..8, 1..4), -2.0f64..2.0),
                1..12,
            ),
            seed in 0u64..1000,
        ) {
            let mut p = BinaryPolynomial::new(8);
            for (idx, c) in &terms { p.add_term(idx, *c); }
            proptest::prop_assume!(!p.is_empty());
            let (_, exact) = brute_force(&p).unwrap();
            let schedule = AnnealSchedule {
                t_start: 5.0, t_end: 1e-3, sweeps: 200, restarts: 4, seed,
            };
            let set = simulated_annealing(&p, &schedule).unwrap();
            proptest::prop_assert!(set.best().unwrap().energy >= exact - 1e-9);
        }
    }
}
