//! `vkf` — certify intersection-theorem hypotheses on simplicial
//! complexes and verify the conclusion for affine maps by exact search.
//!
//! Every subcommand reads JSON, writes one JSON document to stdout
//! (byte-identical for identical inputs and seeds), and reports
//! diagnostics on stderr. Exit codes: 0 success, 1 invalid input,
//! 2 resource guard exceeded.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use vkf_core::certificates::{
    certify_hypotheses, check_complementary_acyclic_with_limit, check_saturated_with_limit,
    weight_lower_bound,
};
use vkf_core::complex::{
    face_poset, generate_boundary, generate_crosspolytope, generate_simplex, order_complex,
    suspension, ComplexJson, Simplex, SimplicialComplex,
};
use vkf_core::conf::{
    build_conf_bounded, join_decomposition, nerve_map, psi_map, upper_ideal_cover, PermAction,
};
use vkf_core::homology::{prodsimplicial_chain_complex, simplicial_chain_complex, PrimeField};
use vkf_core::witness::{
    constraint_lift, find_witness_with_limit, random_trials, verify_witness, AffineMap,
    AffineMapJson, CoordBox,
};
use vkf_core::{Error as CoreError, DEFAULT_MAX_CELLS};

#[derive(Parser)]
#[command(name = "vkf", version, about = "deleted-product intersection workbench")]
struct Cli {
    /// Worker threads (0 = one per core); needs the `parallel` build.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Cap on enumerated faces / cells / tuples.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, transform and describe a simplicial complex.
    Complex(ComplexCmd),
    /// Reduced Betti numbers over F_p.
    Homology(HomologyCmd),
    /// Deleted-product structure and cell counts.
    Conf(ConfCmd),
    /// Complementary-acyclicity sweep (all small disjoint tuples).
    CheckDef1(CheckDef1Cmd),
    /// Saturation report with replayable contractibility witnesses.
    CheckSaturated(CheckSaturatedCmd),
    /// Weight lower bound for the translation action on the deleted product.
    WeightBound(WeightBoundCmd),
    /// Full hypothesis certification for (r, p, k, n, d).
    Certify(CertifyCmd),
    /// Exact witness search for an affine map (optionally the lifted search).
    Witness(WitnessCmd),
    /// Nerve map of the upper-ideal cover, with equivariance checks.
    NerveMap(NerveMapCmd),
    /// Antisymmetric height map on the 2-fold deleted product.
    Psi(PsiCmd),
    /// Seeded random trials of the witness search.
    Trials(TrialsCmd),
}

/// Where the input complex comes from: a file or a generator.
#[derive(Args)]
struct Source {
    /// Complex JSON file ({"format_version":1,"labels":[...],"facets":[[...]]}).
    #[arg(long)]
    complex: Option<PathBuf>,
    /// Generator: simplex:N, boundary:N or crosspolytope:D.
    #[arg(long, conflicts_with = "complex")]
    generate: Option<String>,
}

impl Source {
    fn load(&self) -> Result<(SimplicialComplex, Value), CliError> {
        match (&self.complex, &self.generate) {
            (Some(path), None) => {
                let text = fs::read_to_string(path)?;
                let doc: ComplexJson = serde_json::from_str(&text)?;
                let x = SimplicialComplex::from_json(&doc)?;
                Ok((x, json!({ "complex": path.display().to_string() })))
            }
            (None, Some(spec)) => {
                let x = parse_generator(spec)?;
                Ok((x, json!({ "generate": spec })))
            }
            _ => Err(CliError::Usage("exactly one of --complex or --generate is required".into())),
        }
    }
}

fn parse_generator(spec: &str) -> Result<SimplicialComplex, CliError> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("bad generator {spec:?}; use kind:N")))?;
    let n: u32 = arg
        .parse()
        .map_err(|_| CliError::Usage(format!("bad generator argument {arg:?}")))?;
    match kind {
        "simplex" => Ok(generate_simplex(n)),
        "boundary" => Ok(generate_boundary(n)),
        "crosspolytope" => {
            if n == 0 {
                return Err(CliError::Usage("crosspolytope dimension must be >= 1".into()));
            }
            Ok(generate_crosspolytope(n))
        }
        other => Err(CliError::Usage(format!(
            "unknown generator {other:?}; expected simplex, boundary or crosspolytope"
        ))),
    }
}

#[derive(Args)]
struct ComplexCmd {
    #[command(flatten)]
    source: Source,
    /// Take the n-skeleton.
    #[arg(long, allow_negative_numbers = true)]
    skeleton: Option<i64>,
    /// Delete faces: semicolon-separated vertex lists, e.g. "0,1;2,3".
    #[arg(long)]
    delete: Option<String>,
    /// Join with a second complex (JSON file).
    #[arg(long)]
    join: Option<PathBuf>,
    /// Replace by the barycentric subdivision (order complex of the face poset).
    #[arg(long, default_value_t = false)]
    barycentric: bool,
    /// Replace by the suspension (join with two points).
    #[arg(long, default_value_t = false)]
    suspend: bool,
}

#[derive(Args)]
struct HomologyCmd {
    #[command(flatten)]
    source: Source,
    /// Field characteristic (prime).
    #[arg(long)]
    p: u32,
    /// Highest degree to report.
    #[arg(long, allow_negative_numbers = true)]
    upto: i64,
    /// Compute for the r-fold deleted product instead of the complex itself.
    #[arg(long)]
    r: Option<usize>,
    /// Chain model for --r: prodsimplicial (default) or order-complex.
    #[arg(long, default_value = "prodsimplicial")]
    model: String,
    /// Also write the boundary matrices as "degree row col value" lines.
    #[arg(long)]
    export_matrices: Option<PathBuf>,
}

#[derive(Args)]
struct ConfCmd {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    r: usize,
    /// Restrict to cells of total dimension <= this.
    #[arg(long, allow_negative_numbers = true)]
    skeleton: Option<i64>,
    /// Include the full cell list in the output.
    #[arg(long, default_value_t = false)]
    cells: bool,
}

#[derive(Args)]
struct CheckDef1Cmd {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    k: usize,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[arg(long)]
    p: u32,
}

#[derive(Args)]
struct CheckSaturatedCmd {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    p: u32,
}

#[derive(Args)]
struct WeightBoundCmd {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    p: u32,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
}

#[derive(Args)]
struct CertifyCmd {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    p: u32,
    /// Exponent with r = p^k.
    #[arg(long)]
    k: u32,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[arg(long, allow_negative_numbers = true)]
    d: i64,
}

#[derive(Args)]
struct WitnessCmd {
    #[command(flatten)]
    source: Source,
    /// Coordinates JSON ({"dim":d,"coords":{"0":["1/2","3"],...}}).
    #[arg(long)]
    coords: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[arg(long)]
    r: usize,
    /// Cap on the total dimension of the tuple.
    #[arg(long, allow_negative_numbers = true)]
    bound: Option<i64>,
    /// Run the lifted search on the barycentric subdivision instead.
    #[arg(long, default_value_t = false)]
    lift: bool,
}

#[derive(Args)]
struct NerveMapCmd {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    r: usize,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
}

#[derive(Args)]
struct PsiCmd {
    #[command(flatten)]
    source: Source,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
}

#[derive(Args)]
struct TrialsCmd {
    #[command(flatten)]
    source: Source,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    trials: u32,
    /// Seed for the coordinate sampler (required: trials are stochastic).
    #[arg(long)]
    seed: u64,
    /// Largest absolute numerator on the sampling grid.
    #[arg(long, default_value_t = 1_000_000, allow_negative_numbers = true)]
    max_numerator: i64,
    /// Fixed denominator of the sampling grid.
    #[arg(long, default_value_t = 1000)]
    denominator: u64,
}

#[derive(Debug)]
enum CliError {
    Core(CoreError),
    Io(std::io::Error),
    Json(serde_json::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Json(e) => write!(f, "invalid JSON: {e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::GuardExceeded { .. }) => 2,
            _ => 1,
        }
    }
}

fn main() {
    // exit 1 on usage errors (2 is reserved for the resource guard)
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_help = !e.use_stderr();
            let _ = e.print();
            std::process::exit(if is_help { 0 } else { 1 });
        }
    };
    configure_threads(cli.threads);
    match run(&cli) {
        Ok(doc) => {
            let out = serde_json::to_string_pretty(&doc).expect("documents serialize");
            println!("{out}");
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: usize) {
    if threads > 0 {
        if let Err(e) =
            rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()
        {
            eprintln!("warning: could not configure {threads} threads: {e}");
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(threads: usize) {
    if threads > 0 {
        eprintln!("warning: built without the `parallel` feature; --threads ignored");
    }
}

fn complex_stats(x: &SimplicialComplex) -> Value {
    json!({
        "vertex_count": x.vertex_count(),
        "face_count": x.face_count(),
        "faces_by_dim": x.face_counts_by_dim(),
        "dim": x.dim(),
        "euler_characteristic": x.euler_characteristic(),
        "empty": x.is_empty(),
        "digest": x.digest(),
    })
}

fn parse_face_list(x: &SimplicialComplex, spec: &str) -> Result<Vec<Simplex>, CliError> {
    spec.split(';')
        .map(|part| {
            let labels: Vec<u64> = part
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("bad vertex {v:?} in {spec:?}")))
                })
                .collect::<Result<_, _>>()?;
            Ok(x.simplex_from_labels(&labels)?)
        })
        .collect()
}

fn field(p: u32) -> Result<PrimeField, CliError> {
    Ok(PrimeField::new(p)?)
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let max_cells = cli.max_cells;
    match &cli.command {
        Command::Complex(cmd) => {
            let (mut x, src) = cmd.source.load()?;
            let transforms: u32 = [
                cmd.skeleton.is_some(),
                cmd.delete.is_some(),
                cmd.join.is_some(),
                cmd.barycentric,
                cmd.suspend,
            ]
            .iter()
            .map(|&b| b as u32)
            .sum();
            if transforms > 1 {
                return Err(CliError::Usage("apply at most one transform per invocation".into()));
            }
            let mut applied = json!(null);
            if let Some(nn) = cmd.skeleton {
                x = x.skeleton(nn);
                applied = json!({ "skeleton": nn });
            } else if let Some(spec) = &cmd.delete {
                let sigmas = parse_face_list(&x, spec)?;
                x = x.deletion(&sigmas)?;
                applied = json!({ "delete": spec });
            } else if let Some(path) = &cmd.join {
                let text = fs::read_to_string(path)?;
                let doc: ComplexJson = serde_json::from_str(&text)?;
                let y = SimplicialComplex::from_json(&doc)?;
                x = x.join(&y);
                applied = json!({ "join": path.display().to_string() });
            } else if cmd.barycentric {
                x = order_complex(&face_poset(&x)?).into_complex();
                applied = json!("barycentric");
            } else if cmd.suspend {
                x = suspension(&x);
                applied = json!("suspension");
            }
            Ok(json!({
                "config": { "command": "complex", "source": src, "transform": applied,
                            "max_cells": max_cells },
                "complex": x.to_json(),
                "stats": complex_stats(&x),
            }))
        }
        Command::Homology(cmd) => {
            if cmd.upto < -1 {
                return Err(CliError::Usage("--upto must be at least -1".into()));
            }
            let (x, src) = cmd.source.load()?;
            let fp = field(cmd.p)?;
            let (betti, exported) = match cmd.r {
                None => {
                    let cc = simplicial_chain_complex(&x, fp, cmd.upto);
                    let betti = cc.reduced_betti(cmd.upto)?;
                    let exported = export_matrices(&cmd.export_matrices, &cc)?;
                    (betti, exported)
                }
                Some(r) => {
                    let conf = build_conf_bounded(&x, r, Some(cmd.upto + 1), max_cells)?;
                    match cmd.model.as_str() {
                        "prodsimplicial" => {
                            let cc = prodsimplicial_chain_complex(&conf, fp, cmd.upto);
                            let betti = cc.reduced_betti(cmd.upto)?;
                            let exported = export_matrices(&cmd.export_matrices, &cc)?;
                            (betti, exported)
                        }
                        "order-complex" => {
                            let oc = order_complex(&conf.cell_poset());
                            let cc = simplicial_chain_complex(&oc, fp, cmd.upto);
                            let betti = cc.reduced_betti(cmd.upto)?;
                            let exported = export_matrices(&cmd.export_matrices, &cc)?;
                            (betti, exported)
                        }
                        other => {
                            return Err(CliError::Usage(format!(
                                "unknown model {other:?}; use prodsimplicial or order-complex"
                            )))
                        }
                    }
                }
            };
            Ok(json!({
                "config": { "command": "homology", "source": src, "p": cmd.p,
                            "upto": cmd.upto, "r": cmd.r, "model": cmd.model,
                            "max_cells": max_cells, "exported": exported },
                "betti": betti,
            }))
        }
        Command::Conf(cmd) => {
            let (x, src) = cmd.source.load()?;
            let conf = build_conf_bounded(&x, cmd.r, cmd.skeleton, max_cells)?;
            let cells: Value = if cmd.cells {
                json!(conf
                    .cells()
                    .iter()
                    .map(|c| c
                        .parts()
                        .iter()
                        .map(|s| x.face_labels(s))
                        .collect::<Vec<_>>())
                    .collect::<Vec<_>>())
            } else {
                json!(null)
            };
            Ok(json!({
                "config": { "command": "conf", "source": src, "r": cmd.r,
                            "skeleton": cmd.skeleton, "max_cells": max_cells },
                "result": {
                    "empty": conf.is_empty(),
                    "cell_count": conf.cell_count(),
                    "cells_by_total_dim": conf.cell_counts_by_dim(),
                    "max_total_dim": conf.max_total_dim(),
                    "cells": cells,
                }
            }))
        }
        Command::CheckDef1(cmd) => {
            let (x, src) = cmd.source.load()?;
            let cert = check_complementary_acyclic_with_limit(
                &x,
                cmd.k,
                cmd.n,
                field(cmd.p)?,
                max_cells,
            )?;
            Ok(json!({
                "config": { "command": "check-def1", "source": src, "k": cmd.k,
                            "n": cmd.n, "p": cmd.p, "max_cells": max_cells },
                "certificate": cert,
            }))
        }
        Command::CheckSaturated(cmd) => {
            let (x, src) = cmd.source.load()?;
            let report = check_saturated_with_limit(&x, cmd.r, field(cmd.p)?, max_cells)?;
            Ok(json!({
                "config": { "command": "check-saturated", "source": src, "r": cmd.r,
                            "p": cmd.p, "max_cells": max_cells },
                "report": report,
            }))
        }
        Command::WeightBound(cmd) => {
            let (x, src) = cmd.source.load()?;
            let outcome = weight_lower_bound(&x, cmd.r, field(cmd.p)?, cmd.n)?;
            Ok(json!({
                "config": { "command": "weight-bound", "source": src, "r": cmd.r,
                            "p": cmd.p, "n": cmd.n, "max_cells": max_cells },
                "result": outcome,
            }))
        }
        Command::Certify(cmd) => {
            let (x, src) = cmd.source.load()?;
            let report = certify_hypotheses(&x, cmd.r, field(cmd.p)?, cmd.k, cmd.n, cmd.d)?;
            Ok(json!({
                "config": { "command": "certify", "source": src, "r": cmd.r, "p": cmd.p,
                            "k": cmd.k, "n": cmd.n, "d": cmd.d, "max_cells": max_cells },
                "verdict": if report.verdict { "certified" } else { "not-certified" },
                "report": report,
            }))
        }
        Command::Witness(cmd) => {
            let (x, src) = cmd.source.load()?;
            let text = fs::read_to_string(&cmd.coords)?;
            let doc: AffineMapJson = serde_json::from_str(&text)?;
            let map = AffineMap::from_json(&doc)?;
            let config = json!({
                "command": "witness", "source": src,
                "coords": cmd.coords.display().to_string(),
                "n": cmd.n, "r": cmd.r, "bound": cmd.bound, "lift": cmd.lift,
                "max_cells": max_cells,
            });
            if cmd.lift {
                let lift = constraint_lift(&x, cmd.n, cmd.r, &map)?;
                let witness_json = lift.witness.as_ref().map(|w| w.to_json());
                let (verified, defect) = match &lift.witness {
                    Some(w) => match verify_witness(w, &lift.constraint.lifted) {
                        Ok(()) => (true, None),
                        Err(e) => (false, Some(e.to_string())),
                    },
                    None => (true, None),
                };
                Ok(json!({
                    "config": config,
                    "result": {
                        "found": lift.witness.is_some(),
                        "bound": lift.bound,
                        "zero_extended": lift.constraint.zero_extended,
                        "witness": witness_json,
                        "carrier_chains": lift.carrier_chains,
                        "carriers_in_skeleton": lift.carriers_in_skeleton,
                        "last_coordinate_zero": lift.last_coordinate_zero,
                        "verified": verified,
                        "defect": defect,
                    }
                }))
            } else {
                let witness =
                    find_witness_with_limit(&x, cmd.n, cmd.r, &map, cmd.bound, max_cells)?;
                let (verified, defect) = match &witness {
                    Some(w) => match verify_witness(w, &map) {
                        Ok(()) => (Some(true), None),
                        Err(e) => (Some(false), Some(e.to_string())),
                    },
                    None => (None, None),
                };
                Ok(json!({
                    "config": config,
                    "result": {
                        "found": witness.is_some(),
                        "witness": witness.map(|w| w.to_json()),
                        "verified": verified,
                        "defect": defect,
                    }
                }))
            }
        }
        Command::NerveMap(cmd) => {
            if !(2..=6).contains(&cmd.r) {
                return Err(CliError::Usage(
                    "the exhaustive equivariance check supports 2 <= r <= 6".into(),
                ));
            }
            let (x, src) = cmd.source.load()?;
            let cover = upper_ideal_cover(&x, cmd.r, cmd.n)?;
            let nerve = nerve_map(&cover)?;
            let jd = join_decomposition(&cover);
            let skel = cover.skeleton();
            let table: Vec<Value> = cover
                .p_cell_ids()
                .iter()
                .enumerate()
                .map(|(j, &id)| {
                    let cell: Vec<Vec<u64>> =
                        skel.cell(id).parts().iter().map(|s| x.face_labels(s)).collect();
                    let image: Vec<usize> =
                        (0..cmd.r).filter(|i| nerve.image(j) & (1 << i) != 0).collect();
                    json!({ "cell": cell, "image": image })
                })
                .collect();
            // exhaustive vertex-level equivariance over the symmetric group
            let action = PermAction::symmetric(cmd.r);
            let mut equivariant = true;
            for g in action.elements() {
                for (j, &id) in cover.p_cell_ids().iter().enumerate() {
                    let moved = action.act(g, skel.cell(id)).expect("element of the group");
                    let moved_id = skel.cell_id(&moved).expect("closed under the action");
                    let jm = cover.p_index_of(moved_id).expect("P is invariant");
                    if nerve.image(jm) != vkf_core::conf::permute_mask(g, nerve.image(j)) {
                        equivariant = false;
                    }
                }
            }
            let small_count = jd.sides().iter().filter(|s| matches!(s, vkf_core::conf::JoinSide::Small)).count();
            Ok(json!({
                "config": { "command": "nerve-map", "source": src, "r": cmd.r, "n": cmd.n,
                            "max_cells": max_cells },
                "result": {
                    "skeleton_cells": skel.cell_count(),
                    "p_cells": cover.p_len(),
                    "small_cells": small_count,
                    "vertex_images": table,
                    "checks": { "equivariant": equivariant },
                }
            }))
        }
        Command::Psi(cmd) => {
            let (x, src) = cmd.source.load()?;
            let psi = psi_map(&x, cmd.n)?;
            let skel = psi.skeleton();
            let values: Vec<Value> = (0..skel.cell_count())
                .map(|id| {
                    let cell: Vec<Vec<u64>> =
                        skel.cell(id).parts().iter().map(|s| x.face_labels(s)).collect();
                    json!({ "cell": cell, "value": psi.value(id) })
                })
                .collect();
            let antisymmetric =
                (0..skel.cell_count()).all(|id| psi.value(psi.swap(id)) == -psi.value(id));
            let zero_set_ok = (0..skel.cell_count()).all(|id| {
                let small = skel.cell(id).parts().iter().all(|p| p.dim() <= cmd.n);
                (psi.value(id) == 0) == small
            });
            Ok(json!({
                "config": { "command": "psi", "source": src, "n": cmd.n,
                            "max_cells": max_cells },
                "result": {
                    "skeleton_cells": skel.cell_count(),
                    "values": values,
                    "checks": { "antisymmetric": antisymmetric, "zero_set": zero_set_ok },
                }
            }))
        }
        Command::Trials(cmd) => {
            let (x, src) = cmd.source.load()?;
            let coord_box = CoordBox {
                max_abs_numerator: cmd.max_numerator,
                denominator: cmd.denominator,
            };
            let stats =
                random_trials(&x, cmd.n, cmd.r, cmd.d, cmd.trials, cmd.seed, coord_box)?;
            Ok(json!({
                "config": { "command": "trials", "source": src, "n": cmd.n, "r": cmd.r,
                            "d": cmd.d, "trials": cmd.trials, "seed": cmd.seed,
                            "max_numerator": cmd.max_numerator,
                            "denominator": cmd.denominator, "max_cells": max_cells },
                "stats": stats,
            }))
        }
    }
}

fn export_matrices(
    path: &Option<PathBuf>,
    cc: &vkf_core::homology::ChainComplex,
) -> Result<Option<String>, CliError> {
    let Some(path) = path else {
        return Ok(None);
    };
    let mut buf = Vec::new();
    cc.export_coo(&mut buf)?;
    fs::write(path, buf)?;
    Ok(Some(path.display().to_string()))
}

