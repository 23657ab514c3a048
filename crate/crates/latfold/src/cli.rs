//! Subcommand CLI: build -> solve -> decode -> analyze, plus an
//! end-to-end pipeline. Stages communicate through a run directory
//! holding the manifest, the polynomial file, and sample files.
//!
//! Exit codes: 0 success, 2 usage, 3 data error, 4 capability limit.

use crate::analysis::fes::{build_fes, select_representatives, FesSample, DEFAULT_BINS};
use crate::analysis::{
    contact_energy, detect_violations, kabsch_rmsd, radius_of_gyration, repair, to_angstrom,
    CartesianStructure, CONTACT_CUTOFF_ANGSTROM,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_model, AssembledModel, ContinuityMode, MjSign};
use crate::io::manifest::{RunManifest, Seeds};
use crate::io::samples::{format_bits, parse_bits, read_samples, write_samples};
use crate::io::{digest_bytes, hubo, write_atomic};
use crate::lattice::decode_conformation;
use crate::mj::MjTable;
use crate::poly::BinaryPolynomial;
use crate::quantum::{to_pauli, vqe_minimize, AnsatzConfig, Entanglement, VqeConfig};
use crate::solvers::{
    brute_force_with_cap, simulated_annealing, AnnealSchedule, SampleRecord, SampleSet,
    DEFAULT_BRUTE_CAP,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "latfold", version, about = "FCC-lattice peptide folding via binary optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the binary objective and run manifest for a sequence.
    Build(BuildArgs),
    /// Minimize a built objective.
    Solve(SolveArgs),
    /// Decode bitstrings into lattice and angstrom structures.
    Decode(DecodeArgs),
    /// Metrics, free-energy surface, and representative structures.
    Analyze(AnalyzeArgs),
    /// build + solve + analyze in one go.
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MjSignArg {
    Negated,
    Literal,
}

impl From<MjSignArg> for MjSign {
    fn from(v: MjSignArg) -> Self {
        match v {
            MjSignArg::Negated => MjSign::Negated,
            MjSignArg::Literal => MjSign::Literal,
        }
    }
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Peptide sequence in one-letter codes.
    #[arg(long)]
    sequence: String,
    /// MJ table CSV; falls back to $LATFOLD_MJ, then the synthetic table.
    #[arg(long, env = "LATFOLD_MJ")]
    mj: Option<PathBuf>,
    /// How MJ entries become pair weights.
    #[arg(long, value_enum, default_value = "negated")]
    mj_sign: MjSignArg,
    /// Master seed; selector/SA/VQE streams derive from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Override the calibrated continuity penalty.
    #[arg(long)]
    lambda1: Option<f64>,
    /// Override the calibrated overlap reward weight.
    #[arg(long)]
    lambda2: Option<f64>,
    /// Override the calibrated crossing reward weight.
    #[arg(long)]
    lambda3: Option<f64>,
    /// Penalize only true zero-displacement turns in C1.
    #[arg(long)]
    strict_continuity: bool,
    /// Solve the quadratic truncation (the BQM route) instead of the
    /// full higher-order polynomial.
    #[arg(long)]
    quadratic: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Also export the Pauli-Z Hamiltonian with a JSON sidecar.
    #[arg(long)]
    pauli: bool,
    /// Run directory to create.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(subcommand)]
    solver: SolverCmd,
}

#[derive(Subcommand)]
enum SolverCmd {
    /// Simulated annealing (full polynomial, or truncated with --quadratic at build time).
    Sa(SaArgs),
    /// Exhaustive enumeration (small instances only).
    Brute(BruteArgs),
    /// CVaR-VQE on the dense statevector simulator.
    Vqe(VqeArgs),
}

#[derive(Args)]
struct SaArgs {
    /// Run directory from `build`.
    #[arg(long)]
    run: PathBuf,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Override the manifest's SA seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BruteArgs {
    #[arg(long)]
    run: PathBuf,
    /// Variable-count cap for enumeration.
    #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
    cap: usize,
}

#[derive(Args, Clone)]
struct VqeArgs {
    #[arg(long)]
    run: PathBuf,
    /// Shots per energy evaluation.
    #[arg(long, default_value_t = 4000)]
    shots: usize,
    /// CVaR tail fraction in (0,1].
    #[arg(long, default_value_t = 0.1)]
    cvar_alpha: f64,
    #[arg(long, default_value_t = 500)]
    max_iterations: usize,
    /// Entangling layers in the ansatz.
    #[arg(long, default_value_t = 1)]
    layers: usize,
    #[arg(long, value_enum, default_value = "linear")]
    entanglement: EntanglementArg,
    /// Override the manifest's VQE seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Resume from a previously saved parameter vector (JSON array).
    #[arg(long)]
    resume_from_params: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EntanglementArg {
    Linear,
    Circular,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    run: PathBuf,
    /// Samples file to decode (defaults to the run's newest samples_*.txt).
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Decode a single bitstring instead of a samples file.
    #[arg(long)]
    bits: Option<String>,
    /// Print the JSON report to stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    run: PathBuf,
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Experimental reference PDB for RMSD.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Chain to take Cα atoms from (default: first encountered).
    #[arg(long)]
    chain: Option<char>,
    /// FES bins per axis.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: PathBuf,
    /// Solver for the solve stage.
    #[arg(long, value_enum, default_value = "sa")]
    solver: SolverArg,
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long)]
    chain: Option<char>,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    #[arg(long, default_value_t = 4000)]
    shots: usize,
    #[arg(long, default_value_t = 0.1)]
    cvar_alpha: f64,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Sa,
    Brute,
    Vqe,
}

/// Entry point taking argv without the program name; returns the exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let args = std::iter::once("latfold".to_string()).chain(argv);
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_capability() {
                4
            } else {
                3
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build(args) => {
            let ctx = build_stage(&args.model, &args.out, args.pauli)?;
            println!(
                "built {}-bead model: {} vars, {} terms -> {}",
                ctx.manifest.n_beads,
                ctx.manifest.num_vars,
                ctx.model.hamiltonian.num_terms(),
                args.out.display()
            );
            Ok(())
        }
        Command::Solve(args) => match args.solver {
            SolverCmd::Sa(a) => solve_sa(&a).map(|_| ()),
            SolverCmd::Brute(a) => solve_brute(&a).map(|_| ()),
            SolverCmd::Vqe(a) => solve_vqe(&a).map(|_| ()),
        },
        Command::Decode(args) => decode_stage(&args),
        Command::Analyze(args) => {
            let report = analyze_stage(
                &args.run,
                args.samples.as_deref(),
                args.reference.as_deref(),
                args.chain,
                args.bins,
            )?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_analysis_summary(&report);
            }
            Ok(())
        }
        Command::Pipeline(args) => pipeline(&args),
    }
}

/// Everything `build` leaves behind for later stages.
struct RunContext {
    manifest: RunManifest,
    model: AssembledModel,
}

fn resolve_mj(path: Option<&Path>) -> Result<(MjTable, String, String)> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            let table = MjTable::from_csv(&text)?;
            Ok((table, p.display().to_string(), digest_bytes(text.as_bytes())))
        }
        None => {
            eprintln!(
                "warning: no MJ table given (--mj / $LATFOLD_MJ); using the built-in synthetic table"
            );
            let table = MjTable::synthetic();
            let digest = digest_bytes(table.to_csv().as_bytes());
            Ok((table, "synthetic".to_string(), digest))
        }
    }
}

fn build_stage(args: &ModelArgs, out: &Path, export_pauli: bool) -> Result<RunContext> {
    let sequence = crate::io::parse_sequence(&args.sequence)?;
    let (mj, mj_source, mj_digest) = resolve_mj(args.mj.as_deref())?;
    let sign: MjSign = args.mj_sign.into();
    let continuity = if args.strict_continuity {
        ContinuityMode::Strict
    } else {
        ContinuityMode::Literal
    };
    let overrides = [args.lambda1, args.lambda2, args.lambda3];
    let selector_seed = args.seed;

    let model = match build_model(&sequence, &mj, sign, continuity, selector_seed, overrides) {
        Ok(m) => m,
        Err(Error::ZeroObjectiveWeight) => {
            eprintln!(
                "warning: objective is empty (no non-adjacent pairs or zero weights); \
                 defaulting lambda1=1 lambda2=1 lambda3=0.5 -- override with --lambda1/2/3"
            );
            let fallback = [
                Some(args.lambda1.unwrap_or(1.0)),
                Some(args.lambda2.unwrap_or(1.0)),
                Some(args.lambda3.unwrap_or(0.5)),
            ];
            build_model(&sequence, &mj, sign, continuity, selector_seed, fallback)?
        }
        Err(e) => return Err(e),
    };
    if model.objective.is_empty() {
        eprintln!("warning: objective polynomial is empty for this sequence");
    }

    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        sequence: sequence.iter().collect(),
        n_beads: sequence.len(),
        num_vars: crate::lattice::num_vars(sequence.len()),
        mj_source,
        mj_digest,
        mj_sign: sign,
        continuity,
        quadratic: args.quadratic,
        seeds: Seeds {
            selectors: selector_seed,
            sa: args.seed.wrapping_add(1),
            vqe: args.seed.wrapping_add(2),
        },
        lambdas: model.penalties.clone(),
    };
    manifest.validate()?;

    std::fs::create_dir_all(out)?;
    manifest.save(&out.join("manifest.json"))?;
    write_atomic(&out.join("hamiltonian.hubo"), &hubo::write_poly(&model.hamiltonian))?;
    if export_pauli {
        let h = to_pauli(&model.hamiltonian)?;
        write_atomic(&out.join("pauli.txt"), &hubo::write_pauli(&h))?;
        let sidecar = serde_json::json!({
            "num_qubits": h.num_qubits,
            "terms": h.term_count(),
            "sequence": manifest.sequence,
            "seeds": manifest.seeds,
            "lambdas": manifest.lambdas,
            "mj_digest": manifest.mj_digest,
            "mj_sign": manifest.mj_sign,
        });
        write_atomic(&out.join("pauli.json"), &serde_json::to_string_pretty(&sidecar)?)?;
    }
    Ok(RunContext { manifest, model })
}

fn load_run(dir: &Path) -> Result<(RunManifest, BinaryPolynomial)> {
    let manifest = RunManifest::load(&dir.join("manifest.json"))?;
    let poly = hubo::read_poly(&std::fs::read_to_string(dir.join("hamiltonian.hubo"))?)?;
    if poly.num_vars() != manifest.num_vars {
        return Err(Error::Manifest(format!(
            "polynomial has {} vars but manifest says {}",
            poly.num_vars(),
            manifest.num_vars
        )));
    }
    Ok((manifest, poly))
}

fn load_run_mj(manifest: &RunManifest) -> Result<MjTable> {
    if manifest.mj_source == "synthetic" {
        return Ok(MjTable::synthetic());
    }
    let text = std::fs::read_to_string(&manifest.mj_source)?;
    if digest_bytes(text.as_bytes()) != manifest.mj_digest {
        return Err(Error::Manifest(format!(
            "MJ file {} changed since build (digest mismatch)",
            manifest.mj_source
        )));
    }
    MjTable::from_csv(&text)
}

/// Warn when the lowest-energy sample is a maximally extended chain --
/// the unbounded-reward regime of the C2/C3 terms.
fn warn_if_maximally_extended(manifest: &RunManifest, set: &SampleSet) {
    if let Some(best) = set.best() {
        if let Ok(conf) = decode_conformation(&best.bits, manifest.n_beads) {
            let first = conf.positions[0];
            let last = conf.positions[conf.positions.len() - 1];
            let d2: i64 = (0..3).map(|i| (last[i] - first[i]).pow(2)).sum();
            let max_span = (2 * (manifest.n_beads as i64 - 1)).pow(2);
            if d2 == max_span {
                eprintln!(
                    "warning: minimum-energy sample is a maximally extended chain; \
                     the separation rewards may dominate -- consider lowering lambda2/lambda3"
                );
            }
        }
    }
}

fn solve_sa(args: &SaArgs) -> Result<PathBuf> {
    let (manifest, full) = load_run(&args.run)?;
    let working = if manifest.quadratic {
        full.truncate_to_quadratic()
    } else {
        full.clone()
    };
    let mut schedule =
        AnnealSchedule::scaled_default(&working, args.seed.unwrap_or(manifest.seeds.sa));
    if let Some(s) = args.sweeps {
        schedule.sweeps = s;
    }
    if let Some(r) = args.restarts {
        schedule.restarts = r;
    }
    let set = simulated_annealing(&working, &schedule)?;
    // Quadratic route: bitstrings come from the truncated model, but the
    // recorded energies are always the full polynomial's.
    let source = if manifest.quadratic { "sa-quadratic" } else { "sa" };
    let records = set
        .records
        .into_iter()
        .map(|mut r| {
            r.energy = full.evaluate(&r.bits)?;
            r.source = source.to_string();
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let set = SampleSet::from_records(records);
    warn_if_maximally_extended(&manifest, &set);
    let path = args.run.join("samples_sa.txt");
    write_atomic(&path, &write_samples(&set, Some(&manifest.digest()?), source))?;
    let best = set.best().expect("restarts >= 1");
    println!(
        "sa: best energy {} from {} restarts -> {}",
        best.energy,
        schedule.restarts,
        path.display()
    );
    Ok(path)
}

fn solve_brute(args: &BruteArgs) -> Result<PathBuf> {
    let (manifest, full) = load_run(&args.run)?;
    let (bits, energy) = brute_force_with_cap(&full, args.cap)?;
    let set = SampleSet::from_records(vec![SampleRecord {
        bits,
        energy,
        count: 1,
        source: "brute".into(),
    }]);
    warn_if_maximally_extended(&manifest, &set);
    let path = args.run.join("samples_brute.txt");
    write_atomic(&path, &write_samples(&set, Some(&manifest.digest()?), "brute"))?;
    println!("brute: optimum energy {} -> {}", set.best().unwrap().energy, path.display());
    Ok(path)
}

fn solve_vqe(args: &VqeArgs) -> Result<PathBuf> {
    let (manifest, full) = load_run(&args.run)?;
    let h = to_pauli(&full)?;
    let ansatz = AnsatzConfig::new(
        h.num_qubits,
        args.layers,
        match args.entanglement {
            EntanglementArg::Linear => Entanglement::Linear,
            EntanglementArg::Circular => Entanglement::Circular,
        },
    );
    let cfg = VqeConfig {
        shots: args.shots,
        cvar_alpha: args.cvar_alpha,
        max_iterations: args.max_iterations,
        seed: args.seed.unwrap_or(manifest.seeds.vqe),
        initial_step: 0.5,
    };
    let initial: Option<Vec<f64>> = match &args.resume_from_params {
        Some(p) => Some(serde_json::from_str(&std::fs::read_to_string(p)?)?),
        None => None,
    };
    let outcome = vqe_minimize(&h, &ansatz, &cfg, initial.as_deref())?;

    warn_if_maximally_extended(&manifest, &outcome.samples);
    let digest = manifest.digest()?;
    let path = args.run.join("samples_vqe.txt");
    write_atomic(&path, &write_samples(&outcome.samples, Some(&digest), "vqe"))?;
    let mut trace = String::from("iteration,cvar_energy\n");
    for (i, e) in outcome.trace.iter().enumerate() {
        trace.push_str(&format!("{i},{e}\n"));
    }
    write_atomic(&args.run.join("vqe_trace.csv"), &trace)?;
    write_atomic(
        &args.run.join("vqe_params.json"),
        &serde_json::to_string_pretty(&outcome.best_params)?,
    )?;
    println!(
        "vqe: cvar energy {} after {} iterations, {} distinct bitstrings -> {}",
        outcome.best_energy,
        outcome.trace.len(),
        outcome.samples.len(),
        path.display()
    );
    Ok(path)
}

fn default_samples_file(run: &Path) -> Result<PathBuf> {
    for name in ["samples_sa.txt", "samples_brute.txt", "samples_vqe.txt"] {
        let p = run.join(name);
        if p.exists() {
            return Ok(p);
        }
    }
    Err(Error::Manifest(format!(
        "no samples_*.txt in {}; run `latfold solve` first or pass --samples",
        run.display()
    )))
}

#[derive(Debug, Serialize)]
struct DecodedStructure {
    bits: String,
    count: u64,
    energy: f64,
    positions: Vec<[i64; 3]>,
    overlaps: Vec<(usize, usize)>,
    crossings: Vec<(usize, usize)>,
    degenerate_turns: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coords_angstrom: Option<Vec<[f64; 3]>>,
}

fn decode_stage(args: &DecodeArgs) -> Result<()> {
    let (manifest, full) = load_run(&args.run)?;
    let records: Vec<SampleRecord> = if let Some(bits_str) = &args.bits {
        let bits = parse_bits(bits_str).ok_or(Error::SampleFile {
            line: 0,
            reason: format!("'{bits_str}' is not a bitstring"),
        })?;
        let energy = full.evaluate(&bits)?;
        vec![SampleRecord {
            bits,
            energy,
            count: 1,
            source: "cli".into(),
        }]
    } else {
        let path = match &args.samples {
            Some(p) => p.clone(),
            None => default_samples_file(&args.run)?,
        };
        read_samples(&std::fs::read_to_string(path)?)?.0.records
    };

    let mut decoded = Vec::with_capacity(records.len());
    for r in &records {
        let conf = decode_conformation(&r.bits, manifest.n_beads)?;
        let report = detect_violations(&conf);
        let coords = if report.is_clean() {
            Some(to_angstrom(&conf)?.coords)
        } else {
            None
        };
        decoded.push(DecodedStructure {
            bits: format_bits(&r.bits),
            count: r.count,
            energy: r.energy,
            positions: conf.positions,
            overlaps: report.overlaps,
            crossings: report.crossings,
            degenerate_turns: report.degenerate_turns,
            coords_angstrom: coords,
        });
    }
    let json = serde_json::to_string_pretty(&decoded)?;
    write_atomic(&args.run.join("structures.json"), &json)?;
    if args.json {
        println!("{json}");
    } else {
        println!(
            "decoded {} bitstrings -> {}",
            decoded.len(),
            args.run.join("structures.json").display()
        );
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct StructureMetrics {
    bits: String,
    count: u64,
    energy: f64,
    repaired: bool,
    e_contact: f64,
    rg: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rmsd: Option<f64>,
    coords_angstrom: Vec<[f64; 3]>,
}

#[derive(Debug, Serialize)]
struct FesSummary {
    bins: usize,
    e_edges: Vec<f64>,
    rg_edges: Vec<f64>,
    counts: Vec<u64>,
    /// Row-major [e_bin * bins + rg_bin]; +inf rendered as null in JSON.
    free_energy: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct AnalysisReport {
    sequence: String,
    solver_source: String,
    structures_analyzed: usize,
    structures_rejected: usize,
    structures: Vec<StructureMetrics>,
    fes: FesSummary,
    min_fes_bin: (usize, usize),
    representative_indices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_rmsd: Option<(usize, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_rmsd: Option<f64>,
    /// RMSD of the single lowest-energy structure (the SA-route metric).
    #[serde(skip_serializing_if = "Option::is_none")]
    best_energy_rmsd: Option<f64>,
}

fn analyze_stage(
    run: &Path,
    samples: Option<&Path>,
    reference: Option<&Path>,
    chain: Option<char>,
    bins: usize,
) -> Result<AnalysisReport> {
    let (manifest, _) = load_run(run)?;
    let mj = load_run_mj(&manifest)?;
    let sequence: Vec<char> = manifest.sequence.chars().collect();
    let samples_path = match samples {
        Some(p) => p.to_path_buf(),
        None => default_samples_file(run)?,
    };
    let (set, _) = read_samples(&std::fs::read_to_string(&samples_path)?)?;
    let reference_structure: Option<CartesianStructure> = match reference {
        Some(p) => {
            let s = crate::io::parse_pdb_ca(&std::fs::read_to_string(p)?, chain, None)?;
            if s.n_beads() != sequence.len() {
                return Err(Error::StructureSizeMismatch(sequence.len(), s.n_beads()));
            }
            Some(s)
        }
        None => None,
    };

    let mut metrics: Vec<StructureMetrics> = Vec::new();
    let mut rejected = 0usize;
    for r in &set.records {
        let conf = decode_conformation(&r.bits, manifest.n_beads)?;
        let report = detect_violations(&conf);
        // Paper filter: keep at-most-one-violation structures, repaired.
        let (final_conf, repaired) = if report.is_clean() {
            (conf, false)
        } else {
            match repair(&conf, &report, &sequence, &mj) {
                Ok(fixed) => (fixed, true),
                Err(_) => {
                    rejected += 1;
                    continue;
                }
            }
        };
        let cartesian = to_angstrom(&final_conf)?;
        let e_contact = contact_energy(&cartesian, &sequence, &mj, CONTACT_CUTOFF_ANGSTROM)?;
        let rg = radius_of_gyration(&cartesian);
        let rmsd = match &reference_structure {
            Some(reference) => Some(kabsch_rmsd(&cartesian, reference)?),
            None => None,
        };
        metrics.push(StructureMetrics {
            bits: format_bits(&r.bits),
            count: r.count,
            energy: r.energy,
            repaired,
            e_contact,
            rg,
            rmsd,
            coords_angstrom: cartesian.coords,
        });
    }
    if metrics.is_empty() {
        return Err(Error::Manifest(format!(
            "all {rejected} sampled structures exceeded the one-violation repair limit; \
             raise --restarts (or --shots) for a more diverse sample cloud"
        )));
    }

    let fes_samples: Vec<FesSample> = metrics
        .iter()
        .enumerate()
        .map(|(i, m)| FesSample {
            e_contact: m.e_contact,
            rg: m.rg,
            count: m.count,
            index: i,
        })
        .collect();
    let grid = build_fes(&fes_samples, bins)?;
    let rmsd_map: Option<BTreeMap<usize, f64>> = reference_structure.as_ref().map(|_| {
        metrics
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.rmsd.map(|r| (i, r)))
            .collect()
    });
    let reps = select_representatives(&grid, rmsd_map.as_ref());

    // Lowest-energy structure (metrics keep the sample-set energy order).
    let best_energy_rmsd = metrics
        .iter()
        .min_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap())
        .and_then(|m| m.rmsd);

    // gnuplot-compatible matrix: e_center rg_center F, blank line per block.
    let mut fes_csv = String::from("# e_contact_center rg_center free_energy\n");
    for e in 0..grid.bins {
        for r in 0..grid.bins {
            let ec = 0.5 * (grid.e_edges[e] + grid.e_edges[e + 1]);
            let rc = 0.5 * (grid.rg_edges[r] + grid.rg_edges[r + 1]);
            let f = grid.free_energy[e * grid.bins + r];
            let f_str = if f.is_finite() {
                format!("{f}")
            } else {
                "inf".to_string()
            };
            fes_csv.push_str(&format!("{ec} {rc} {f_str}\n"));
        }
        fes_csv.push('\n');
    }
    write_atomic(&run.join("fes.csv"), &fes_csv)?;

    let report = AnalysisReport {
        sequence: manifest.sequence.clone(),
        solver_source: set
            .records
            .first()
            .map(|r| r.source.clone())
            .unwrap_or_else(|| "unknown".into()),
        structures_analyzed: metrics.len(),
        structures_rejected: rejected,
        structures: metrics,
        fes: FesSummary {
            bins: grid.bins,
            e_edges: grid.e_edges.clone(),
            rg_edges: grid.rg_edges.clone(),
            counts: grid.counts.clone(),
            free_energy: grid.free_energy.clone(),
        },
        min_fes_bin: reps.bin,
        representative_indices: reps.structure_indices,
        min_rmsd: reps.min_rmsd,
        mean_rmsd: reps.mean_rmsd,
        best_energy_rmsd,
    };
    write_atomic(&run.join("analysis.json"), &serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

fn print_analysis_summary(report: &AnalysisReport) {
    println!(
        "analyzed {} structures ({} rejected) from {}",
        report.structures_analyzed, report.structures_rejected, report.solver_source
    );
    println!(
        "min-FES bin {:?} holds {} structure(s)",
        report.min_fes_bin,
        report.representative_indices.len()
    );
    if let Some((idx, rmsd)) = report.min_rmsd {
        println!("min RMSD in bin: {rmsd:.3} A (structure {idx})");
    }
    if let Some(mean) = report.mean_rmsd {
        println!("mean RMSD in bin: {mean:.3} A");
    }
    if let Some(r) = report.best_energy_rmsd {
        println!("RMSD of minimum-energy structure: {r:.3} A");
    }
}

fn pipeline(args: &PipelineArgs) -> Result<()> {
    build_stage(&args.model, &args.out, false)?;
    let samples_path = match args.solver {
        SolverArg::Sa => solve_sa(&SaArgs {
            run: args.out.clone(),
            sweeps: args.sweeps,
            restarts: args.restarts,
            seed: None,
        })?,
        SolverArg::Brute => solve_brute(&BruteArgs {
            run: args.out.clone(),
            cap: DEFAULT_BRUTE_CAP,
        })?,
        SolverArg::Vqe => solve_vqe(&VqeArgs {
            run: args.out.clone(),
            shots: args.shots,
            cvar_alpha: args.cvar_alpha,
            max_iterations: 500,
            layers: 1,
            entanglement: EntanglementArg::Linear,
            seed: None,
            resume_from_params: None,
        })?,
    };
    let report = analyze_stage(
        &args.out,
        Some(&samples_path),
        args.reference.as_deref(),
        args.chain,
        args.bins,
    )?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_analysis_summary(&report);
    }
    Ok(())
}
