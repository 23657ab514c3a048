//! JSON-in / JSON-out demo operations. All logic lives here so it can be
//! unit-tested on the host; the wasm exports in lib.rs are thin wrappers.

use latfold::analysis::fes::{build_fes, select_representatives, FesSample};
use latfold::analysis::{
    contact_energy, detect_violations, radius_of_gyration, repair, to_angstrom,
    CONTACT_CUTOFF_ANGSTROM,
};
use latfold::hamiltonian::{build_model, AssembledModel, ContinuityMode, MjSign};
use latfold::io::samples::{format_bits, parse_bits};
use latfold::io::sequence::parse_sequence;
use latfold::lattice::decode_conformation;
use latfold::mj::MjTable;
use latfold::solvers::{simulated_annealing, AnnealSchedule, SampleSet};
use serde::{Deserialize, Serialize};

const MAX_DEMO_BEADS: usize = 12;

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

#[derive(Deserialize)]
struct DecodeParams {
    bits: String,
}

#[derive(Serialize)]
struct DecodedOut {
    n_beads: usize,
    positions: Vec<[i64; 3]>,
    overlaps: Vec<(usize, usize)>,
    crossings: Vec<(usize, usize)>,
    degenerate_turns: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<[f64; 3]>>,
}

/// Decode a raw bitstring (length 5(N-1)) into lattice coordinates.
pub fn decode_bits_json(input: &str) -> String {
    let params: DecodeParams = match serde_json::from_str(input) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let bits = match parse_bits(params.bits.trim()) {
        Some(b) if !b.is_empty() && b.len() % 5 == 0 => b,
        _ => return err_json("bits must be a nonempty 0/1 string with length divisible by 5"),
    };
    let n_beads = bits.len() / 5 + 1;
    let conf = match decode_conformation(&bits, n_beads) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let report = detect_violations(&conf);
    let coords = if report.degenerate_turns.is_empty() {
        to_angstrom(&conf).ok().map(|s| s.coords)
    } else {
        None
    };
    let out = DecodedOut {
        n_beads,
        positions: conf.positions,
        overlaps: report.overlaps,
        crossings: report.crossings,
        degenerate_turns: report.degenerate_turns,
        coords,
    };
    serde_json::to_string(&out).unwrap_or_else(err_json)
}

#[derive(Deserialize)]
struct FoldParams {
    sequence: String,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default = "default_sweeps")]
    sweeps: usize,
    #[serde(default = "default_restarts")]
    restarts: usize,
    /// Paste an MJ CSV here; the synthetic table is used when absent.
    mj_csv: Option<String>,
    #[serde(default)]
    literal_sign: bool,
    #[serde(default)]
    strict_continuity: bool,
    #[serde(default = "default_bins")]
    bins: usize,
}

fn default_seed() -> u64 {
    8
}
fn default_sweeps() -> usize {
    800
}
fn default_restarts() -> usize {
    120
}
fn default_bins() -> usize {
    24
}

#[derive(Serialize)]
struct StructureOut {
    bits: String,
    energy: f64,
    count: u64,
    repaired: bool,
    e_contact: f64,
    rg: f64,
    coords: Vec<[f64; 3]>,
}

#[derive(Serialize)]
struct FoldOut {
    sequence: String,
    num_vars: usize,
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
    sampled_distinct: usize,
    rejected: usize,
    best_energy: f64,
    /// Violation-free (possibly repaired) structures, best energy first.
    structures: Vec<StructureOut>,
    fes: FesOut,
    min_bin: (usize, usize),
    min_bin_structures: Vec<usize>,
}

#[derive(Serialize)]
struct FesOut {
    bins: usize,
    e_edges: Vec<f64>,
    rg_edges: Vec<f64>,
    counts: Vec<u64>,
    /// -ln(n/n_max); empty bins are serialized as null.
    free_energy: Vec<f64>,
}

struct FoldRun {
    sequence: Vec<char>,
    model: AssembledModel,
    samples: SampleSet,
    mj: MjTable,
}

fn run_fold(params: &FoldParams) -> Result<FoldRun, String> {
    let sequence = parse_sequence(&params.sequence).map_err(|e| e.to_string())?;
    if sequence.len() > MAX_DEMO_BEADS {
        return Err(format!(
            "demo caps sequences at {MAX_DEMO_BEADS} beads, got {}",
            sequence.len()
        ));
    }
    if sequence.len() < 3 {
        return Err("need at least 3 residues to fold".into());
    }
    let mj = match &params.mj_csv {
        Some(text) => MjTable::from_csv(text).map_err(|e| e.to_string())?,
        None => MjTable::synthetic(),
    };
    let sign = if params.literal_sign {
        MjSign::Literal
    } else {
        MjSign::Negated
    };
    let continuity = if params.strict_continuity {
        ContinuityMode::Strict
    } else {
        ContinuityMode::Literal
    };
    let model = build_model(&sequence, &mj, sign, continuity, params.seed, [None; 3])
        .map_err(|e| e.to_string())?;
    let mut schedule = AnnealSchedule::scaled_default(&model.hamiltonian, params.seed.wrapping_add(1));
    schedule.sweeps = params.sweeps.clamp(10, 20_000);
    schedule.restarts = params.restarts.clamp(1, 2_000);
    let samples = simulated_annealing(&model.hamiltonian, &schedule).map_err(|e| e.to_string())?;
    Ok(FoldRun {
        sequence,
        model,
        samples,
        mj,
    })
}

/// Build the model, anneal, filter/repair, and report structures plus the
/// free-energy surface in one call.
pub fn fold_json(input: &str) -> String {
    let params: FoldParams = match serde_json::from_str(input) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let run = match run_fold(&params) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let n = run.sequence.len();

    let mut structures = Vec::new();
    let mut rejected = 0usize;
    for r in &run.samples.records {
        let conf = match decode_conformation(&r.bits, n) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let report = detect_violations(&conf);
        let (final_conf, repaired) = if report.is_clean() {
            (conf, false)
        } else {
            match repair(&conf, &report, &run.sequence, &run.mj) {
                Ok(fixed) => (fixed, true),
                Err(_) => {
                    rejected += 1;
                    continue;
                }
            }
        };
        let cart = match to_angstrom(&final_conf) {
            Ok(c) => c,
            Err(_) => {
                rejected += 1;
                continue;
            }
        };
        let e_contact =
            match contact_energy(&cart, &run.sequence, &run.mj, CONTACT_CUTOFF_ANGSTROM) {
                Ok(e) => e,
                Err(e) => return err_json(e),
            };
        structures.push(StructureOut {
            bits: format_bits(&r.bits),
            energy: r.energy,
            count: r.count,
            repaired,
            e_contact,
            rg: radius_of_gyration(&cart),
            coords: cart.coords,
        });
    }
    if structures.is_empty() {
        return err_json(
            "every sampled structure had unrepairable violations; try another seed or more restarts",
        );
    }

    let fes_samples: Vec<FesSample> = structures
        .iter()
        .enumerate()
        .map(|(i, s)| FesSample {
            e_contact: s.e_contact,
            rg: s.rg,
            count: s.count,
            index: i,
        })
        .collect();
    let grid = match build_fes(&fes_samples, params.bins.clamp(4, 100)) {
        Ok(g) => g,
        Err(e) => return err_json(e),
    };
    let reps = select_representatives(&grid, None);

    let out = FoldOut {
        sequence: run.sequence.iter().collect(),
        num_vars: run.model.hamiltonian.num_vars(),
        lambda1: run.model.penalties.lambda1,
        lambda2: run.model.penalties.lambda2,
        lambda3: run.model.penalties.lambda3,
        sampled_distinct: run.samples.len(),
        rejected,
        best_energy: run.samples.best().map(|b| b.energy).unwrap_or(f64::NAN),
        structures,
        fes: FesOut {
            bins: grid.bins,
            e_edges: grid.e_edges,
            rg_edges: grid.rg_edges,
            counts: grid.counts,
            free_energy: grid.free_energy,
        },
        min_bin: reps.bin,
        min_bin_structures: reps.structure_indices,
    };
    serde_json::to_string(&out).unwrap_or_else(err_json)
}

#[derive(Serialize)]
struct TurnTableOut {
    entries: Vec<TurnEntry>,
}

#[derive(Serialize)]
struct TurnEntry {
    bits: String,
    displacement: [i64; 3],
}

/// The full 32-row turn table (the encoding's ground truth), for the
/// explainer panel.
pub fn turn_table_json() -> String {
    let entries: Vec<TurnEntry> = latfold::lattice::enumerate_turn_table()
        .into_iter()
        .map(|(bits, d)| TurnEntry {
            bits: format!(
                "{}{}{}{}{}",
                bits.q1, bits.q2, bits.q3, bits.q4, bits.q5
            ),
            displacement: d.as_array(),
        })
        .collect();
    serde_json::to_string(&TurnTableOut { entries }).unwrap_or_else(err_json)
}
