//! 2D free-energy surface over (contact energy, radius of gyration).
//!
//! F = -ln(n / n_max) in kT = 1 units over a bins x bins histogram of the
//! observed ranges with a 1% margin; empty bins carry +inf and the most
//! populated bin sits exactly at F = 0.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default histogram resolution per axis.
pub const DEFAULT_BINS: usize = 30;

/// One analyzed structure: contact energy, radius of gyration, sample
/// multiplicity, and the caller's structure index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FesSample {
    pub e_contact: f64,
    pub rg: f64,
    pub count: u64,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FesGrid {
    pub bins: usize,
    /// Axis 1 (contact energy) bin edges, length bins + 1.
    pub e_edges: Vec<f64>,
    /// Axis 2 (radius of gyration) bin edges, length bins + 1.
    pub rg_edges: Vec<f64>,
    /// Row-major [e_bin * bins + rg_bin] populations (sample counts).
    pub counts: Vec<u64>,
    /// Free energies; empty bins are +inf.
    pub free_energy: Vec<f64>,
    /// Structure indices falling in each bin.
    pub members: Vec<Vec<usize>>,
}

impl FesGrid {
    pub fn at(&self, e_bin: usize, rg_bin: usize) -> (u64, f64) {
        let i = e_bin * self.bins + rg_bin;
        (self.counts[i], self.free_energy[i])
    }

    /// Bin with the minimum free energy; ties resolve to the lower
    /// contact-energy bin, then the lower Rg bin.
    pub fn min_bin(&self) -> (usize, usize) {
        let mut best = (f64::INFINITY, 0, 0);
        for e in (0..self.bins).rev() {
            for r in (0..self.bins).rev() {
                let f = self.free_energy[e * self.bins + r];
                if f <= best.0 {
                    best = (f, e, r);
                }
            }
        }
        (best.1, best.2)
    }
}

fn edges(min: f64, max: f64, bins: usize) -> Vec<f64> {
    // 1% margin on each side; degenerate ranges widen by a fixed 0.5.
    let (lo, hi) = if max > min {
        let margin = 0.01 * (max - min);
        (min - margin, max + margin)
    } else {
        (min - 0.5, max + 0.5)
    };
    let width = (hi - lo) / bins as f64;
    (0..=bins).map(|i| lo + width * i as f64).collect()
}

fn bin_of(edges: &[f64], v: f64) -> usize {
    let bins = edges.len() - 1;
    let width = (edges[bins] - edges[0]) / bins as f64;
    (((v - edges[0]) / width) as usize).min(bins - 1)
}

/// Histogram the samples (weighted by their counts) and convert
/// populations to free energies.
pub fn build_fes(samples: &[FesSample], bins: usize) -> Result<FesGrid> {
    if samples.is_empty() || bins == 0 {
        return Err(Error::EmptyFes);
    }
    let e_min = samples.iter().map(|s| s.e_contact).fold(f64::INFINITY, f64::min);
    let e_max = samples.iter().map(|s| s.e_contact).fold(f64::NEG_INFINITY, f64::max);
    let rg_min = samples.iter().map(|s| s.rg).fold(f64::INFINITY, f64::min);
    let rg_max = samples.iter().map(|s| s.rg).fold(f64::NEG_INFINITY, f64::max);
    let e_edges = edges(e_min, e_max, bins);
    let rg_edges = edges(rg_min, rg_max, bins);

    let mut counts = vec![0u64; bins * bins];
    let mut members = vec![Vec::new(); bins * bins];
    for s in samples {
        let i = bin_of(&e_edges, s.e_contact) * bins + bin_of(&rg_edges, s.rg);
        counts[i] += s.count;
        members[i].push(s.index);
    }
    let n_max = *counts.iter().max().unwrap() as f64;
    let free_energy = counts
        .iter()
        .map(|&n| {
            if n == 0 {
                f64::INFINITY
            } else {
                -((n as f64 / n_max).ln())
            }
        })
        .collect();
    Ok(FesGrid {
        bins,
        e_edges,
        rg_edges,
        counts,
        free_energy,
        members,
    })
}

/// Structures extracted from the minimum-free-energy bin, with RMSD
/// statistics when a reference was available to the caller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representatives {
    pub bin: (usize, usize),
    pub structure_indices: Vec<usize>,
    /// (index, rmsd) of the bin's best member against the reference.
    pub min_rmsd: Option<(usize, f64)>,
    /// Mean RMSD over the bin's members.
    pub mean_rmsd: Option<f64>,
}

/// Pick the minimum-F bin and, when per-structure RMSDs are supplied,
/// its minimum and mean RMSD members.
pub fn select_representatives(
    grid: &FesGrid,
    rmsd_by_index: Option<&std::collections::BTreeMap<usize, f64>>,
) -> Representatives {
    let bin = grid.min_bin();
    let structure_indices = grid.members[bin.0 * grid.bins + bin.1].clone();
    let (min_rmsd, mean_rmsd) = match rmsd_by_index {
        Some(map) => {
            let values: Vec<(usize, f64)> = structure_indices
                .iter()
                .filter_map(|&i| map.get(&i).map(|&r| (i, r)))
                .collect();
            if values.is_empty() {
                (None, None)
            } else {
                let min = values
                    .iter()
                    .copied()
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                let mean = values.iter().map(|(_, r)| r).sum::<f64>() / values.len() as f64;
                (Some(min), Some(mean))
            }
        }
        None => (None, None),
    };
    Representatives {
        bin,
        structure_indices,
        min_rmsd,
        mean_rmsd,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn identical_samples_single_bin() {
        let samples = vec![
            FesSample { e_contact: -1.0, rg: 2.0, count: 5, index: 0 },
            FesSample { e_contact: -1.0, rg: 2.0, count: 7, index: 1 },
        ];
        let grid = build_fes(&samples, 10).unwrap();
        let occupied: Vec<usize> = (0..grid.counts.len())
            .filter(|&i| grid.counts[i] > 0)
            .collect();
        assert_eq!(occupied.len(), 1);
        assert_eq!(grid.free_energy[occupied[0]], 0.0);
        assert_eq!(grid.counts[occupied[0]], 12);
    }

    #[test]
    fn two_equal_bins_both_zero() {
        let samples = vec![
            FesSample { e_contact: 0.0, rg: 1.0, count: 4, index: 0 },
            FesSample { e_contact: 10.0, rg: 9.0, count: 4, index: 1 },
        ];
        let grid = build_fes(&samples, 4).unwrap();
        let zeros = grid.free_energy.iter().filter(|f| **f == 0.0).count();
        assert_eq!(zeros, 2);
    }

    #[test]
    fn ninety_ten_split() {
        let samples = vec![
            FesSample { e_contact: 0.0, rg: 1.0, count: 90, index: 0 },
            FesSample { e_contact: 5.0, rg: 4.0, count: 10, index: 1 },
        ];
        let grid = build_fes(&samples, 2).unwrap();
        let mut finite: Vec<f64> = grid
            .free_energy
            .iter()
            .copied()
            .filter(|f| f.is_finite())
            .collect();
        finite.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(finite.len(), 2);
        assert_eq!(finite[0], 0.0);
        assert!((finite[1] - 9f64.ln()).abs() < 1e-12);
        // Everything else is empty, hence +inf.
        assert!(grid.free_energy.iter().filter(|f| !f.is_finite()).all(|f| *f > 0.0));
    }

    #[test]
    fn free_energy_nonnegative_min_zero() {
        let samples: Vec<FesSample> = (0..20)
            .map(|i| FesSample {
                e_contact: (i % 5) as f64,
                rg: (i % 3) as f64,
                count: 1 + (i % 4) as u64,
                index: i,
            })
            .collect();
        let grid = build_fes(&samples, 5).unwrap();
        assert!(grid.free_energy.iter().all(|f| *f >= 0.0));
        let min = grid.free_energy.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(min, 0.0);
    }

    #[test]
    fn representatives_and_tie_break() {
        // Single structure: its RMSD is both min and mean.
        let samples = vec![FesSample { e_contact: -2.0, rg: 3.0, count: 1, index: 7 }];
        let grid = build_fes(&samples, 3).unwrap();
        let mut rmsd = BTreeMap::new();
        rmsd.insert(7usize, 1.25);
        let reps = select_representatives(&grid, Some(&rmsd));
        assert_eq!(reps.structure_indices, vec![7]);
        assert_eq!(reps.min_rmsd, Some((7, 1.25)));
        assert_eq!(reps.mean_rmsd, Some(1.25));

        // Bin with RMSDs {2, 4}: min 2, mean 3.
        let samples = vec![
            FesSample { e_contact: 0.0, rg: 0.0, count: 1, index: 0 },
            FesSample { e_contact: 0.0, rg: 0.0, count: 1, index: 1 },
        ];
        let grid = build_fes(&samples, 2).unwrap();
        let mut rmsd = BTreeMap::new();
        rmsd.insert(0usize, 2.0);
        rmsd.insert(1usize, 4.0);
        let reps = select_representatives(&grid, Some(&rmsd));
        assert_eq!(reps.min_rmsd, Some((0, 2.0)));
        assert_eq!(reps.mean_rmsd, Some(3.0));

        // Tie between bins: the lower contact-energy bin wins.
        let samples = vec![
            FesSample { e_contact: 0.0, rg: 0.0, count: 3, index: 0 },
            FesSample { e_contact: 9.0, rg: 9.0, count: 3, index: 1 },
        ];
        let grid = build_fes(&samples, 2).unwrap();
        let reps = select_representatives(&grid, None);
        assert_eq!(reps.bin, (0, 0));
        assert_eq!(reps.structure_indices, vec![0]);
        assert_eq!(reps.mean_rmsd, None);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(build_fes(&[], 10), Err(Error::EmptyFes)));
    }
}
