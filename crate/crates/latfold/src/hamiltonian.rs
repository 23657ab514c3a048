//! Binary objective construction.
//!
//! The consolidated objective is `λ0 Obj + λ1 C1 - λ2 C2 - λ3 C3` over the
//! 5(N-1) turn variables: `Obj` sums pair weights times squared inter-bead
//! separations, `C1` penalizes broken chain continuity per turn, `C2`
//! rewards separation of non-adjacent beads along one randomly selected
//! axis per pair, and `C3` does the same for bond-midpoint separations of
//! non-adjacent bonds. All polynomials here use paper lattice units
//! (face-diagonal components are ±0.5).

use crate::error::{Error, Result};
use crate::lattice::{self, BITS_PER_TURN};
use crate::mj::MjTable;
use crate::poly::BinaryPolynomial;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How MJ entries become pair weights in `Obj`.
///
/// `Negated` (the default) flips the sign so attractive (negative) MJ
/// entries turn into positive distance penalties that pull the pair
/// together when minimized; `Literal` keeps the table values as printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MjSign {
    #[default]
    Negated,
    Literal,
}

impl MjSign {
    pub fn apply(self, mj_value: f64) -> f64 {
        match self {
            MjSign::Negated => -mj_value,
            MjSign::Literal => mj_value,
        }
    }
}

/// Continuity constraint flavour.
///
/// `Literal` expands the published per-turn product form, which leaves a
/// 0.5625 residual on face-diagonal turns; `Strict` penalizes exactly the
/// 14 zero-displacement bit patterns of each group by 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ContinuityMode {
    #[default]
    Literal,
    Strict,
}

/// Penalty factors of the consolidated objective plus the calibration
/// intermediates they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyFactors {
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub c_obj: f64,
    pub c_continuity: f64,
    pub c_overlap: f64,
}

/// One-hot axis choice for a pair constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn component(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Random one-hot axis selectors for the overlap (bead-pair) and crossing
/// (bond-pair) constraints, reproducible from the recorded seed.
///
/// Draw order is fixed: bead pairs (i,j), j >= i+2, in lexicographic
/// order, then bond pairs (r,k), k >= r+2, likewise.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSelectors {
    pub seed: u64,
    bead_pairs: BTreeMap<(usize, usize), Axis>,
    bond_pairs: BTreeMap<(usize, usize), Axis>,
}

impl AxisSelectors {
    pub fn generate(n_beads: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3u8) {
            0 => Axis::X,
            1 => Axis::Y,
            _ => Axis::Z,
        };
        let mut bead_pairs = BTreeMap::new();
        for (i, j) in bead_pair_indices(n_beads) {
            bead_pairs.insert((i, j), draw(&mut rng));
        }
        let mut bond_pairs = BTreeMap::new();
        for (r, k) in bond_pair_indices(n_beads) {
            bond_pairs.insert((r, k), draw(&mut rng));
        }
        Self {
            seed,
            bead_pairs,
            bond_pairs,
        }
    }

    pub fn bead_pair(&self, i: usize, j: usize) -> Result<Axis> {
        self.bead_pairs
            .get(&(i, j))
            .copied()
            .ok_or(Error::MissingSelector(i, j))
    }

    pub fn bond_pair(&self, r: usize, k: usize) -> Result<Axis> {
        self.bond_pairs
            .get(&(r, k))
            .copied()
            .ok_or(Error::MissingSelector(r, k))
    }

    /// Override a bead-pair selector (tests).
    pub fn set_bead_pair(&mut self, i: usize, j: usize, axis: Axis) {
        self.bead_pairs.insert((i, j), axis);
    }

    /// Override a bond-pair selector (tests).
    pub fn set_bond_pair(&mut self, r: usize, k: usize, axis: Axis) {
        self.bond_pairs.insert((r, k), axis);
    }
}

/// Non-adjacent bead pairs (i,j), j >= i+2, 0-based.
pub fn bead_pair_indices(n_beads: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n_beads.saturating_sub(2) {
        for j in i + 2..n_beads {
            v.push((i, j));
        }
    }
    v
}

/// Non-adjacent bond pairs (r,k), k >= r+2, over bonds 0..N-1, 0-based.
pub fn bond_pair_indices(n_beads: usize) -> Vec<(usize, usize)> {
    let n_bonds = n_beads.saturating_sub(1);
    let mut v = Vec::new();
    for r in 0..n_bonds.saturating_sub(2) {
        for k in r + 2..n_bonds {
            v.push((r, k));
        }
    }
    v
}

/// Degree <= 4 polynomials for one turn's (x,y,z) displacement components
/// in paper units, over the full variable set.
pub fn turn_component_polynomials(
    turn_index: usize,
    n_beads: usize,
) -> Result<[BinaryPolynomial; 3]> {
    if n_beads < 2 || turn_index > n_beads - 2 {
        return Err(Error::TurnIndexOutOfRange {
            index: turn_index,
            beads: n_beads,
        });
    }
    let nv = lattice::num_vars(n_beads);
    Ok(turn_components(turn_index, nv))
}

fn turn_components(turn_index: usize, num_vars: usize) -> [BinaryPolynomial; 3] {
    let base = BITS_PER_TURN * turn_index;
    let v = |k: usize| BinaryPolynomial::var(num_vars, base + k);
    let one = BinaryPolynomial::constant(num_vars, 1.0);
    let (q1, q2, q3, q4, q5) = (v(0), v(1), v(2), v(3), v(4));

    // Δa = 0.5 - 0.5 q1 - q2 + q1 q2 ; Δb = 0.5 + 0.5 q1 - q3 - q1 q2
    let mut da = BinaryPolynomial::constant(num_vars, 0.5);
    da.add_assign(&q1.scale(-0.5));
    da.add_assign(&q2.scale(-1.0));
    da.add_assign(&q1.mul(&q2));
    let mut db = BinaryPolynomial::constant(num_vars, 0.5);
    db.add_assign(&q1.scale(0.5));
    db.add_assign(&q3.scale(-1.0));
    db.add_assign(&q1.mul(&q2).scale(-1.0));

    let q4q5 = q4.mul(&q5);
    let q4_not5 = q4.mul(&one.sub(&q5));
    let not4_q5 = one.sub(&q4).mul(&q5);

    let px = q4q5.mul(&da).add(&q4_not5.mul(&db));
    let py = not4_q5.mul(&da).add(&q4q5.mul(&db));
    let pz = q4_not5.mul(&da).add(&not4_q5.mul(&db));
    [px, py, pz]
}

/// All turns' component polynomials, shared by the builders below.
fn all_turn_components(n_beads: usize) -> Vec<[BinaryPolynomial; 3]> {
    let nv = lattice::num_vars(n_beads);
    (0..n_beads - 1).map(|t| turn_components(t, nv)).collect()
}

/// Summed component over turns a..b (exclusive), i.e. the bead_b - bead_a
/// separation along `axis` in paper units.
fn span_sum(turns: &[[BinaryPolynomial; 3]], a: usize, b: usize, axis: usize) -> BinaryPolynomial {
    let nv = turns[0][axis].num_vars();
    let mut s = BinaryPolynomial::new(nv);
    for t in &turns[a..b] {
        s.add_assign(&t[axis]);
    }
    s
}

/// Pairwise MJ-weighted squared-distance objective (Eq. Obj):
/// Σ_{j<k-1} w_jk ( Σx² + Σy² + Σz² ) over non-adjacent bead pairs.
pub fn build_objective(
    sequence: &[char],
    mj: &MjTable,
    sign: MjSign,
) -> Result<BinaryPolynomial> {
    let n = sequence.len();
    if n < 2 {
        return Err(Error::TooFewBeads(n));
    }
    let turns = all_turn_components(n);
    let mut obj = BinaryPolynomial::new(lattice::num_vars(n));
    for (a, b) in bead_pair_indices(n) {
        let w = sign.apply(mj.get(sequence[a], sequence[b])?);
        if w == 0.0 {
            continue;
        }
        for axis in 0..3 {
            let s = span_sum(&turns, a, b, axis);
            obj.add_assign(&s.square().scale(w));
        }
    }
    Ok(obj)
}

/// Continuity constraint C1: per turn, (1-x²)(1-y²)(1-z²) expanded
/// (`Literal`), or the exact zero-displacement indicator (`Strict`).
pub fn build_continuity(n_beads: usize, mode: ContinuityMode) -> Result<BinaryPolynomial> {
    if n_beads < 2 {
        return Err(Error::TooFewBeads(n_beads));
    }
    let nv = lattice::num_vars(n_beads);
    let turns = all_turn_components(n_beads);
    let mut c1 = BinaryPolynomial::new(nv);
    for (t, comps) in turns.iter().enumerate() {
        match mode {
            ContinuityMode::Literal => {
                let one = BinaryPolynomial::constant(nv, 1.0);
                let mut product = one.clone();
                for comp in comps {
                    product = product.mul(&one.sub(&comp.square()));
                }
                c1.add_assign(&product);
            }
            ContinuityMode::Strict => {
                c1.add_assign(&zero_turn_indicator(t, nv));
            }
        }
    }
    Ok(c1)
}

/// Polynomial that is 1 exactly on the 14 zero-displacement bit patterns
/// of turn `t` and 0 on the 18 move patterns.
fn zero_turn_indicator(turn_index: usize, num_vars: usize) -> BinaryPolynomial {
    let base = BITS_PER_TURN * turn_index;
    let one = BinaryPolynomial::constant(num_vars, 1.0);
    let mut indicator = BinaryPolynomial::new(num_vars);
    for (bits, d) in lattice::enumerate_turn_table() {
        if !d.is_zero() {
            continue;
        }
        let pattern = [bits.q1, bits.q2, bits.q3, bits.q4, bits.q5];
        let mut term = one.clone();
        for (k, &bit) in pattern.iter().enumerate() {
            let q = BinaryPolynomial::var(num_vars, base + k);
            term = term.mul(&if bit == 1 { q } else { one.sub(&q) });
        }
        indicator.add_assign(&term);
    }
    indicator
}

/// Overlap constraint C2: per non-adjacent bead pair, the squared
/// separation along the pair's selected axis.
pub fn build_overlap(n_beads: usize, selectors: &AxisSelectors) -> Result<BinaryPolynomial> {
    if n_beads < 2 {
        return Err(Error::TooFewBeads(n_beads));
    }
    let turns = all_turn_components(n_beads);
    let mut c2 = BinaryPolynomial::new(lattice::num_vars(n_beads));
    for (a, b) in bead_pair_indices(n_beads) {
        let axis = selectors.bead_pair(a, b)?.component();
        let s = span_sum(&turns, a, b, axis);
        c2.add_assign(&s.square());
    }
    Ok(c2)
}

/// Crossing constraint C3: per non-adjacent bond pair (r,k), the squared
/// separation of bond midpoints along the selected axis. The midpoint
/// difference is Σ_{l=r}^{k-1} t_l + (t_k - t_r)/2.
pub fn build_crossing(n_beads: usize, selectors: &AxisSelectors) -> Result<BinaryPolynomial> {
    if n_beads < 2 {
        return Err(Error::TooFewBeads(n_beads));
    }
    let turns = all_turn_components(n_beads);
    let mut c3 = BinaryPolynomial::new(lattice::num_vars(n_beads));
    for (r, k) in bond_pair_indices(n_beads) {
        let axis = selectors.bond_pair(r, k)?.component();
        let mut s = span_sum(&turns, r, k, axis);
        s.add_assign(&turns[k][axis].scale(0.5));
        s.add_assign(&turns[r][axis].scale(-0.5));
        c3.add_assign(&s.square());
    }
    Ok(c3)
}

/// Penalty calibration: c_obj = Σ w_jk over objective pairs, c_continuity
/// and c_overlap = the summand counts of C1 and C2, λ1 = |c_obj/c_cont|,
/// λ2 = |c_obj/c_over|, λ3 = λ2/2, λ0 = 1.
pub fn calibrate_penalties(
    sequence: &[char],
    mj: &MjTable,
    sign: MjSign,
) -> Result<PenaltyFactors> {
    let n = sequence.len();
    if n < 2 {
        return Err(Error::TooFewBeads(n));
    }
    let mut c_obj = 0.0;
    for (a, b) in bead_pair_indices(n) {
        c_obj += sign.apply(mj.get(sequence[a], sequence[b])?);
    }
    if c_obj == 0.0 {
        return Err(Error::ZeroObjectiveWeight);
    }
    let c_continuity = (n - 1) as f64;
    let c_overlap = bead_pair_indices(n).len() as f64;
    let lambda2 = (c_obj / c_overlap).abs();
    Ok(PenaltyFactors {
        lambda0: 1.0,
        lambda1: (c_obj / c_continuity).abs(),
        lambda2,
        lambda3: 0.5 * lambda2,
        c_obj,
        c_continuity,
        c_overlap,
    })
}

/// Consolidated objective: λ0·Obj + λ1·C1 - λ2·C2 - λ3·C3. The minus
/// signs make C2 and C3 rewards for separation.
pub fn assemble(
    obj: &BinaryPolynomial,
    c1: &BinaryPolynomial,
    c2: &BinaryPolynomial,
    c3: &BinaryPolynomial,
    penalties: &PenaltyFactors,
) -> Result<BinaryPolynomial> {
    for p in [c1, c2, c3] {
        if p.num_vars() != obj.num_vars() {
            return Err(Error::VarCountMismatch(obj.num_vars(), p.num_vars()));
        }
    }
    let mut h = obj.scale(penalties.lambda0);
    h.add_assign(&c1.scale(penalties.lambda1));
    h.add_assign(&c2.scale(-penalties.lambda2));
    h.add_assign(&c3.scale(-penalties.lambda3));
    Ok(h)
}

/// Everything `assemble` needs, built in one pass from a sequence.
#[derive(Debug, Clone)]
pub struct AssembledModel {
    pub hamiltonian: BinaryPolynomial,
    pub objective: BinaryPolynomial,
    pub continuity: BinaryPolynomial,
    pub overlap: BinaryPolynomial,
    pub crossing: BinaryPolynomial,
    pub penalties: PenaltyFactors,
    pub selectors: AxisSelectors,
}

/// Build the full model for a sequence. `lambda_overrides` replaces the
/// calibrated (λ1, λ2, λ3) entries that are `Some`; calibration failure
/// from zero pair weight is an error unless every override is given.
pub fn build_model(
    sequence: &[char],
    mj: &MjTable,
    sign: MjSign,
    continuity: ContinuityMode,
    selector_seed: u64,
    lambda_overrides: [Option<f64>; 3],
) -> Result<AssembledModel> {
    let n = sequence.len();
    let selectors = AxisSelectors::generate(n, selector_seed);
    let objective = build_objective(sequence, mj, sign)?;
    let continuity_poly = build_continuity(n, continuity)?;
    let overlap = build_overlap(n, &selectors)?;
    let crossing = build_crossing(n, &selectors)?;
    let mut penalties = match calibrate_penalties(sequence, mj, sign) {
        Ok(p) => p,
        Err(Error::ZeroObjectiveWeight) if lambda_overrides.iter().all(Option::is_some) => {
            PenaltyFactors {
                lambda0: 1.0,
                lambda1: 0.0,
                lambda2: 0.0,
                lambda3: 0.0,
                c_obj: 0.0,
                c_continuity: (n - 1) as f64,
                c_overlap: bead_pair_indices(n).len() as f64,
            }
        }
        Err(e) => return Err(e),
    };
    if let Some(l1) = lambda_overrides[0] {
        penalties.lambda1 = l1;
    }
    if let Some(l2) = lambda_overrides[1] {
        penalties.lambda2 = l2;
    }
    if let Some(l3) = lambda_overrides[2] {
        penalties.lambda3 = l3;
    }
    let hamiltonian = assemble(&objective, &continuity_poly, &overlap, &crossing, &penalties)?;
    Ok(AssembledModel {
        hamiltonian,
        objective,
        continuity: continuity_poly,
        overlap,
        crossing,
        penalties,
        selectors,
    })
}
