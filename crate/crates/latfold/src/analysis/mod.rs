//! Structure analysis: violation detection and repair on the integer
//! lattice, angstrom-scale conversion, and the RMSD / radius-of-gyration /
//! contact-energy metrics.

pub mod fes;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_turn_table, Displacement, LatticeConformation};
use crate::mj::MjTable;
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

/// Cα-Cα bond length after rescaling.
pub const BOND_LENGTH_ANGSTROM: f64 = 3.8;
/// Contact cutoff; pairs strictly closer than this count.
pub const CONTACT_CUTOFF_ANGSTROM: f64 = 8.0;

/// Bead coordinates in angstroms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartesianStructure {
    pub coords: Vec<[f64; 3]>,
}

impl CartesianStructure {
    pub fn n_beads(&self) -> usize {
        self.coords.len()
    }
}

/// Exact integer findings on a lattice conformation. Overlaps cover
/// non-adjacent bead pairs; coincidence of *adjacent* beads is a
/// degenerate (zero-displacement) turn and is listed separately.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub overlaps: Vec<(usize, usize)>,
    pub crossings: Vec<(usize, usize)>,
    pub degenerate_turns: Vec<usize>,
}

impl ViolationReport {
    /// Overlaps plus crossings (the paper's filter counts these).
    pub fn hard_count(&self) -> usize {
        self.overlaps.len() + self.crossings.len()
    }

    pub fn total_events(&self) -> usize {
        self.hard_count() + self.degenerate_turns.len()
    }

    pub fn is_clean(&self) -> bool {
        self.total_events() == 0
    }
}

/// Overlaps: equal positions for bead pairs (i,j), j >= i+2.
/// Crossings: bond pairs (r,k), k >= r+2, with equal doubled-midpoint sums
/// p_r + p_{r+1} = p_k + p_{k+1}. Degenerate turns: zero displacements.
pub fn detect_violations(conf: &LatticeConformation) -> ViolationReport {
    let pos = &conf.positions;
    let n = pos.len();
    let mut report = ViolationReport::default();
    for i in 0..n {
        for j in i + 2..n {
            if pos[i] == pos[j] {
                report.overlaps.push((i, j));
            }
        }
    }
    let bond_sum = |b: usize| {
        [
            pos[b][0] + pos[b + 1][0],
            pos[b][1] + pos[b + 1][1],
            pos[b][2] + pos[b + 1][2],
        ]
    };
    let n_bonds = n.saturating_sub(1);
    for r in 0..n_bonds {
        for k in r + 2..n_bonds {
            if bond_sum(r) == bond_sum(k) {
                report.crossings.push((r, k));
            }
        }
    }
    for (t, d) in conf.turns().enumerate() {
        if d.is_zero() {
            report.degenerate_turns.push(t);
        }
    }
    report
}

/// The 18 nonzero turn displacements in a fixed enumeration order.
fn neighbor_shell() -> Vec<Displacement> {
    enumerate_turn_table()
        .into_iter()
        .map(|(_, d)| d)
        .filter(|d| !d.is_zero())
        .collect()
}

fn add(p: [i64; 3], d: Displacement) -> [i64; 3] {
    [p[0] + d.dx, p[1] + d.dy, p[2] + d.dz]
}

/// Repair a conformation with at most one hard violation by relocating a
/// single bead of the offending pair to a free lattice site that keeps the
/// chain connected and clears the report. Among candidates, the one with
/// the lowest resulting contact energy wins; ties go to the first site in
/// the fixed neighbor enumeration order.
pub fn repair(
    conf: &LatticeConformation,
    report: &ViolationReport,
    sequence: &[char],
    mj: &MjTable,
) -> Result<LatticeConformation> {
    if report.is_clean() {
        return Ok(conf.clone());
    }
    if report.hard_count() > 1 {
        return Err(Error::RepairRejected(format!(
            "{} overlaps and {} crossings exceed the one-violation limit",
            report.overlaps.len(),
            report.crossings.len()
        )));
    }

    // Beads eligible for relocation, in deterministic order: overlap pairs
    // (later bead first), crossing bond endpoints, then the bead ending a
    // degenerate turn.
    let mut movable: Vec<usize> = Vec::new();
    for &(i, j) in &report.overlaps {
        movable.push(j);
        movable.push(i);
    }
    for &(r, k) in &report.crossings {
        movable.extend_from_slice(&[k + 1, k, r + 1, r]);
    }
    for &t in &report.degenerate_turns {
        movable.push(t + 1);
        movable.push(t);
    }
    movable.dedup();

    let shell = neighbor_shell();
    let n = conf.positions.len();
    let mut best: Option<(f64, LatticeConformation)> = None;
    for &bead in &movable {
        let candidate_sites: Vec<[i64; 3]> = match bead {
            0 => shell.iter().map(|&d| add(conf.positions[1], d)).collect(),
            b if b == n - 1 => shell
                .iter()
                .map(|&d| add(conf.positions[n - 2], d))
                .collect(),
            b => {
                let before: Vec<[i64; 3]> =
                    shell.iter().map(|&d| add(conf.positions[b - 1], d)).collect();
                before
                    .into_iter()
                    .filter(|s| {
                        shell
                            .iter()
                            .any(|&d| add(conf.positions[b + 1], d) == *s)
                    })
                    .collect()
            }
        };
        for site in candidate_sites {
            if conf
                .positions
                .iter()
                .enumerate()
                .any(|(k, p)| k != bead && *p == site)
            {
                continue;
            }
            let mut positions = conf.positions.clone();
            positions[bead] = site;
            let fixed = LatticeConformation {
                positions,
                source_bits: None,
            };
            if !detect_violations(&fixed).is_clean() {
                continue;
            }
            let cartesian = to_angstrom(&fixed)?;
            let e = contact_energy(&cartesian, sequence, mj, CONTACT_CUTOFF_ANGSTROM)?;
            match &best {
                Some((best_e, _)) if e >= *best_e => {}
                _ => best = Some((e, fixed)),
            }
        }
    }
    best.map(|(_, c)| c).ok_or_else(|| {
        Error::RepairRejected("no single-bead relocation clears the violations".into())
    })
}

/// Rescale each bond to exactly 3.8 Å, preserving direction (hence all
/// bond angles); bead 0 sits at the origin.
pub fn to_angstrom(conf: &LatticeConformation) -> Result<CartesianStructure> {
    let mut coords = Vec::with_capacity(conf.positions.len());
    let mut pos = [0.0f64; 3];
    coords.push(pos);
    for (t, d) in conf.turns().enumerate() {
        if d.is_zero() {
            return Err(Error::DegenerateTurn(t));
        }
        let len = (d.norm_sq() as f64).sqrt();
        let scale = BOND_LENGTH_ANGSTROM / len;
        pos = [
            pos[0] + d.dx as f64 * scale,
            pos[1] + d.dy as f64 * scale,
            pos[2] + d.dz as f64 * scale,
        ];
        coords.push(pos);
    }
    Ok(CartesianStructure { coords })
}

fn centroid(coords: &[[f64; 3]]) -> Vector3<f64> {
    let mut c = Vector3::zeros();
    for p in coords {
        c += Vector3::new(p[0], p[1], p[2]);
    }
    c / coords.len() as f64
}

/// RMSD after optimal proper superposition (rotation determinant +1, so
/// mirror images keep a positive residual). Rank-deficient references
/// (collinear chains) are handled by the SVD: any singular-vector choice
/// in the degenerate subspace yields the same optimal residual, and the
/// determinant correction keeps the rotation proper.
pub fn kabsch_rmsd(model: &CartesianStructure, reference: &CartesianStructure) -> Result<f64> {
    let n = model.coords.len();
    if n != reference.coords.len() || n < 3 {
        return Err(Error::StructureSizeMismatch(n, reference.coords.len()));
    }
    let mc = centroid(&model.coords);
    let rc = centroid(&reference.coords);
    let mut h = Matrix3::zeros();
    for (m, r) in model.coords.iter().zip(&reference.coords) {
        let mv = Vector3::new(m[0], m[1], m[2]) - mc;
        let rv = Vector3::new(r[0], r[1], r[2]) - rc;
        h += mv * rv.transpose();
    }
    let svd = h.svd(true, true);
    let u = svd.u.expect("svd with u");
    let v_t = svd.v_t.expect("svd with v_t");
    let d = (v_t.transpose() * u.transpose()).determinant();
    let mut correction = Matrix3::identity();
    correction[(2, 2)] = if d < 0.0 { -1.0 } else { 1.0 };
    let rotation = v_t.transpose() * correction * u.transpose();

    let mut sum_sq = 0.0;
    for (m, r) in model.coords.iter().zip(&reference.coords) {
        let mv = Vector3::new(m[0], m[1], m[2]) - mc;
        let rv = Vector3::new(r[0], r[1], r[2]) - rc;
        let diff = rotation * mv - rv;
        sum_sq += diff.norm_squared();
    }
    Ok((sum_sq / n as f64).sqrt())
}

/// Root-mean-square distance of beads from their centre of mass.
pub fn radius_of_gyration(s: &CartesianStructure) -> f64 {
    if s.coords.is_empty() {
        return 0.0;
    }
    let c = centroid(&s.coords);
    let sum_sq: f64 = s
        .coords
        .iter()
        .map(|p| (Vector3::new(p[0], p[1], p[2]) - c).norm_squared())
        .sum();
    (sum_sq / s.coords.len() as f64).sqrt()
}

/// Sum of literal MJ weights over non-adjacent pairs strictly closer than
/// the cutoff (the boundary itself does not count).
pub fn contact_energy(
    s: &CartesianStructure,
    sequence: &[char],
    mj: &MjTable,
    cutoff: f64,
) -> Result<f64> {
    let n = s.coords.len();
    let mut total = 0.0;
    for j in 0..n {
        for k in j + 2..n {
            let d2: f64 = (0..3).map(|a| (s.coords[j][a] - s.coords[k][a]).powi(2)).sum();
            if d2.sqrt() < cutoff {
                total += mj.get(sequence[j], sequence[k])?;
            }
        }
    }
    Ok(total)
}
