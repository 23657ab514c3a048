//! Turn-based FCC lattice encoding.
//!
//! Each turn is selected by five bits: `(q1,q2,q3)` pick one of eight turn
//! states and `(q4,q5)` pick the plane the turn lives in. The 18 reachable
//! neighbours split plane-wise into 12 face diagonals (two components
//! ±0.5) and 6 axis moves (one component ±1). All arithmetic here uses
//! *doubled* lattice units (0.5 steps scaled by 2) so geometry checks are
//! exact integer comparisons.

use crate::error::{Error, Result};

/// Bits per turn group: three turn bits plus two plane bits.
pub const BITS_PER_TURN: usize = 5;

/// Variable count for an `n_beads`-bead chain: 5(N-1).
pub fn num_vars(n_beads: usize) -> usize {
    BITS_PER_TURN * (n_beads - 1)
}

/// One turn group's five binary selectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TurnBits {
    pub q1: u8,
    pub q2: u8,
    pub q3: u8,
    pub q4: u8,
    pub q5: u8,
}

impl TurnBits {
    pub fn new(q1: u8, q2: u8, q3: u8, q4: u8, q5: u8) -> Self {
        debug_assert!([q1, q2, q3, q4, q5].iter().all(|&b| b <= 1));
        Self { q1, q2, q3, q4, q5 }
    }

    /// Build from a 5-bit slice ordered `(q1,q2,q3,q4,q5)`.
    pub fn from_slice(bits: &[u8]) -> Self {
        Self::new(bits[0], bits[1], bits[2], bits[3], bits[4])
    }

    /// Enumeration index 0..32 with q1 as the most significant bit, matching
    /// the left-to-right bitstring order.
    pub fn from_index(index: u8) -> Self {
        debug_assert!(index < 32);
        Self::new(
            (index >> 4) & 1,
            (index >> 3) & 1,
            (index >> 2) & 1,
            (index >> 1) & 1,
            index & 1,
        )
    }

    pub fn to_index(self) -> u8 {
        (self.q1 << 4) | (self.q2 << 3) | (self.q3 << 2) | (self.q4 << 1) | self.q5
    }
}

/// Lattice step in doubled units (1 doubled unit = 0.5 paper lattice units).
///
/// Valid values: zero, the 12 face diagonals (two components ±1, one 0),
/// and the 6 axis moves (one component ±2, two 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Displacement {
    pub dx: i64,
    pub dy: i64,
    pub dz: i64,
}

impl Displacement {
    pub const ZERO: Displacement = Displacement { dx: 0, dy: 0, dz: 0 };

    pub fn new(dx: i64, dy: i64, dz: i64) -> Self {
        Self { dx, dy, dz }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    /// Squared length in doubled units (2 for face diagonals, 4 for axis moves).
    pub fn norm_sq(self) -> i64 {
        self.dx * self.dx + self.dy * self.dy + self.dz * self.dz
    }

    pub fn as_array(self) -> [i64; 3] {
        [self.dx, self.dy, self.dz]
    }
}

/// Turn-state values of the in-plane components, indexed by the state order
/// (0,0,0), (0,0,1), (0,1,0), (0,1,1), (1,0,0), (1,0,1), (1,1,0), (1,1,1).
pub const DELTA_A: [f64; 8] = [0.5, 0.5, -0.5, -0.5, 0.0, 0.0, 0.0, 0.0];
pub const DELTA_B: [f64; 8] = [0.5, -0.5, 0.5, -0.5, 1.0, 0.0, 0.0, -1.0];

/// In-plane component Δa of a turn state: 0.5 - 0.5 q1 - q2 + q1 q2.
pub fn delta_a(q1: u8, q2: u8, _q3: u8) -> f64 {
    let (q1, q2) = (q1 as f64, q2 as f64);
    0.5 - 0.5 * q1 - q2 + q1 * q2
}

/// In-plane component Δb of a turn state: 0.5 + 0.5 q1 - q3 - q1 q2.
pub fn delta_b(q1: u8, q2: u8, q3: u8) -> f64 {
    let (q1, q2, q3) = (q1 as f64, q2 as f64, q3 as f64);
    0.5 + 0.5 * q1 - q3 - q1 * q2
}

/// The 8x8 basis matrix over the monomials
/// `[1, q1, q2, q3, q1q2, q2q3, q1q3, q1q2q3]` evaluated on the eight turn
/// states, together with the coefficient vectors expressing Δa and Δb in
/// that basis.
#[derive(Debug, Clone)]
pub struct TurnBasis {
    pub b3: [[f64; 8]; 8],
    pub c_delta_a: [f64; 8],
    pub c_delta_b: [f64; 8],
}

/// Monomials of the 3-bit basis as index sets into (q1,q2,q3).
const BASIS_MONOMIALS: [&[usize]; 8] = [
    &[],
    &[0],
    &[1],
    &[2],
    &[0, 1],
    &[1, 2],
    &[0, 2],
    &[0, 1, 2],
];

impl TurnBasis {
    /// Construct the basis matrix from the eight states and solve
    /// `B3 * c = Δa` (resp. Δb) exactly by inclusion-exclusion over
    /// monomial subsets. All values involved are halves, so the solve is
    /// exact in f64.
    pub fn new() -> Self {
        let mut b3 = [[0.0; 8]; 8];
        for state in 0..8u8 {
            let q = [(state >> 2) & 1, (state >> 1) & 1, state & 1];
            for (col, monomial) in BASIS_MONOMIALS.iter().enumerate() {
                b3[state as usize][col] = if monomial.iter().all(|&i| q[i] == 1) {
                    1.0
                } else {
                    0.0
                };
            }
        }
        Self {
            b3,
            c_delta_a: Self::solve(&DELTA_A),
            c_delta_b: Self::solve(&DELTA_B),
        }
    }

    /// Möbius inversion: the coefficient of monomial S is
    /// Σ_{T ⊆ S} (-1)^{|S|-|T|} f(state where exactly T is set).
    fn solve(values: &[f64; 8]) -> [f64; 8] {
        let state_of = |mask: usize| -> usize {
            // mask bit i corresponds to q_{i+1}; state index has q1 as MSB.
            let q1 = mask & 1;
            let q2 = (mask >> 1) & 1;
            let q3 = (mask >> 2) & 1;
            (q1 << 2) | (q2 << 1) | q3
        };
        let mut coeffs = [0.0; 8];
        for (col, monomial) in BASIS_MONOMIALS.iter().enumerate() {
            let full: usize = monomial.iter().map(|&i| 1usize << i).sum();
            let mut acc = 0.0;
            let mut sub = full;
            loop {
                let sign = if (full.count_ones() - sub.count_ones()) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                acc += sign * values[state_of(sub)];
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & full;
            }
            coeffs[col] = acc;
        }
        coeffs
    }

    /// Evaluate `B3 · c` for one row (turn state).
    pub fn reconstruct(&self, coeffs: &[f64; 8], state: usize) -> f64 {
        (0..8).map(|c| self.b3[state][c] * coeffs[c]).sum()
    }
}

impl Default for TurnBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// Decode one 5-bit turn group to a lattice displacement in doubled units.
///
/// The plane routing is
/// `x += q4 q5 Δa + q4 (1-q5) Δb`,
/// `y += (1-q4) q5 Δa + q4 q5 Δb`,
/// `z += q4 (1-q5) Δa + (1-q4) q5 Δb`,
/// then every component is doubled. Total function: every input maps to a
/// valid (possibly zero) displacement.
pub fn decode_turn(bits: TurnBits) -> Displacement {
    let a = delta_a(bits.q1, bits.q2, bits.q3);
    let b = delta_b(bits.q1, bits.q2, bits.q3);
    let (q4, q5) = (bits.q4 as f64, bits.q5 as f64);
    let x = q4 * q5 * a + q4 * (1.0 - q5) * b;
    let y = (1.0 - q4) * q5 * a + q4 * q5 * b;
    let z = q4 * (1.0 - q5) * a + (1.0 - q4) * q5 * b;
    // Components are exact multiples of 0.5; doubling lands on integers.
    Displacement::new(
        (2.0 * x).round() as i64,
        (2.0 * y).round() as i64,
        (2.0 * z).round() as i64,
    )
}

/// All 32 turn-bit patterns with their displacements.
///
/// Exactly 18 distinct nonzero displacements appear; 14 patterns map to
/// zero (8 with no plane selected plus the two degenerate turn states in
/// each of the three planes).
pub fn enumerate_turn_table() -> Vec<(TurnBits, Displacement)> {
    (0..32u8)
        .map(|i| {
            let bits = TurnBits::from_index(i);
            (bits, decode_turn(bits))
        })
        .collect()
}

/// Bead positions in doubled integer units, anchored at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeConformation {
    pub positions: Vec<[i64; 3]>,
    pub source_bits: Option<Vec<u8>>,
}

impl LatticeConformation {
    pub fn n_beads(&self) -> usize {
        self.positions.len()
    }

    /// Per-turn displacements (successive position differences).
    pub fn turns(&self) -> impl Iterator<Item = Displacement> + '_ {
        self.positions
            .windows(2)
            .map(|w| Displacement::new(w[1][0] - w[0][0], w[1][1] - w[0][1], w[1][2] - w[0][2]))
    }

    /// Construct directly from positions (used by tests and repair).
    pub fn from_positions(positions: Vec<[i64; 3]>) -> Self {
        Self {
            positions,
            source_bits: None,
        }
    }
}

/// Decode a full bitstring (length 5(N-1), leftmost bit = variable 0) to a
/// chain of bead positions. Degenerate groups decode to zero displacements
/// without error; structural validity is judged by the analysis module.
pub fn decode_conformation(bits: &[u8], n_beads: usize) -> Result<LatticeConformation> {
    if n_beads < 2 {
        return Err(Error::TooFewBeads(n_beads));
    }
    let expected = num_vars(n_beads);
    if bits.len() != expected {
        return Err(Error::BitLength {
            expected,
            actual: bits.len(),
            beads: n_beads,
        });
    }
    let mut positions = Vec::with_capacity(n_beads);
    let mut pos = [0i64; 3];
    positions.push(pos);
    for group in bits.chunks(BITS_PER_TURN) {
        let d = decode_turn(TurnBits::from_slice(group));
        pos = [pos[0] + d.dx, pos[1] + d.dy, pos[2] + d.dz];
        positions.push(pos);
    }
    Ok(LatticeConformation {
        positions,
        source_bits: Some(bits.to_vec()),
    })
}
