//! Command-line surface. Every command prints one JSON document.

use std::ffi::OsString;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use parblocks_core::curves::{stable_graphs, trivalent_graphs, StableGraph, WeightAssignment};
use parblocks_core::fusion::{LevelContext, WeightPartition};
use parblocks_core::picard::{
    anticanonical_class, boundary_model_descriptor, descends, divisor_to_level_weights, in_cone_e,
    projective_model_weight, ray_generator, ConePosition, DivisorClass, Facet,
};
use parblocks_core::weights::{
    count_chambers, enumerate_walls, is_dominant, perturb_general, weight_ac, Dominance, ParabolicWeight,
};
use parblocks_core::Error;

use crate::cache::{CachedEngine, TableCache};
use crate::error::{CliError, CliResult};
use crate::format::{
    hilbert_to_doc, rational_to_string, read_document, weights_to_doc, DatumDoc, DivisorDoc, GraphDoc, WallDoc,
    WeightsDoc,
};
use crate::sampling::{realized_sign_vectors, DEFAULT_SAMPLES};

#[derive(Debug, Parser)]
#[command(name = "parblocks", version, about = "Ranks of sl_r conformal blocks and parabolic weight data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Directory for persisted fusion tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Evaluate independent pieces on a thread pool.
    #[arg(long, global = true)]
    pub parallel: bool,
    /// Timing and cache statistics on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank of a conformal block on a graph or a smooth curve.
    Rank(RankArgs),
    /// Wall catalog for `(r, n)`.
    Walls(ShapeArgs),
    /// Chamber count by sampling, plus the exact count for small cases.
    Chambers(ChamberArgs),
    /// Whether the moduli map for a weight is dominant.
    Dominant(DominantArgs),
    /// Position of a divisor class relative to the cone E.
    Cone(DivisorArgs),
    /// Projective model weight or boundary descriptor of a divisor class.
    Model(DivisorArgs),
    /// Hilbert function along a weight ray on one or more graphs.
    Hilbert(HilbertArgs),
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long)]
    pub rank: usize,
    #[arg(long)]
    pub level: u32,
    /// Graph document (path or inline JSON); conflicts with --genus.
    #[arg(long, conflicts_with_all = ["genus", "points"])]
    pub graph: Option<String>,
    #[arg(long)]
    pub genus: Option<u32>,
    #[arg(long)]
    pub points: Option<u32>,
    /// JSON list of partitions for legs 1..n (path or inline).
    #[arg(long)]
    pub labels: Option<String>,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    #[arg(long)]
    pub rank: usize,
    #[arg(long)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct ChamberArgs {
    #[arg(long)]
    pub rank: usize,
    #[arg(long)]
    pub points: usize,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DominantArgs {
    #[arg(long)]
    pub genus: u32,
    /// Weight document; without it a general point near the central weight
    /// of `(--rank, --points)` is used.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    #[arg(long, conflicts_with = "anticanonical")]
    pub divisor: Option<String>,
    /// Use the anticanonical class of `(--rank, --points)`.
    #[arg(long)]
    pub anticanonical: bool,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Catalog {
    Stable,
    Trivalent,
}

#[derive(Debug, Args)]
pub struct HilbertArgs {
    /// Graph documents; repeat for several.
    #[arg(long)]
    pub graph: Vec<String>,
    /// Use every graph of a catalog of type `(--genus, --points)`.
    #[arg(long, value_enum, conflicts_with = "graph")]
    pub catalog: Option<Catalog>,
    #[arg(long)]
    pub genus: Option<u32>,
    #[arg(long)]
    pub points: Option<u32>,
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_degree: u32,
}

/// Exit code and the text to print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn missing(flag: &str, why: &str) -> CliError {
    CliError::Validation(format!("{flag} is required {why}"))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

pub fn graph_hash(graph: &StableGraph) -> String {
    let text = serde_json::to_string(&GraphDoc::from_graph(graph)).expect("graph serializes");
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

struct Context {
    cache: Option<TableCache>,
    parallel: bool,
}

fn cmd_rank(args: &RankArgs, cx: &Context) -> CliResult<Value> {
    let ctx = LevelContext::new(args.rank, args.level)?;
    let mut graph = match (&args.graph, args.genus) {
        (Some(src), None) => read_document::<GraphDoc>(src)?.to_graph(args.rank)?,
        (None, Some(g)) => {
            let g = StableGraph::smooth(g, args.points.unwrap_or(0));
            g.validate().map_err(|v| CliError::Validation(v.to_string()))?;
            g
        }
        (None, None) => return Err(missing("--graph or --genus", "for rank")),
        (Some(_), Some(_)) => return Err(CliError::Validation("give either --graph or --genus, not both".into())),
    };
    if let Some(src) = &args.labels {
        if !graph.labels.is_empty() {
            return Err(CliError::Validation("labels given both in the graph and by --labels".into()));
        }
        let parts: Vec<Vec<u32>> = read_document(src)?;
        if parts.len() != graph.n() as usize {
            return Err(CliError::Validation(format!("{} labels for {} legs", parts.len(), graph.n())));
        }
        graph.labels = (1u32..)
            .zip(&parts)
            .map(|(leg, p)| Ok((leg, WeightPartition::new(args.rank, p)?)))
            .collect::<Result<_, Error>>()?;
    }
    let cached = CachedEngine::new(ctx, cx.cache.as_ref())?;
    let value = cached.engine.graph_rank(&graph, &WeightAssignment::from_graph(&graph, args.level))?;
    cached.persist()?;
    let stats = cached.engine.stats();
    Ok(json!({
        "rank": value.to_string(),
        "provenance": {
            "r": args.rank,
            "level": args.level,
            "graph_sha256": graph_hash(&graph),
            "cache_hits": stats.hits,
            "cache_misses": stats.misses,
            "cache_loaded_entries": cached.loaded(),
        },
    }))
}

fn cmd_walls(args: &ShapeArgs) -> CliResult<Value> {
    check_rank(args.rank)?;
    let walls = enumerate_walls(args.rank, args.points);
    let docs: Vec<WallDoc> = walls.iter().map(|w| WallDoc::from(&w.spec)).collect();
    Ok(json!({ "r": args.rank, "n": args.points, "count": docs.len(), "walls": docs }))
}

fn check_rank(r: usize) -> CliResult<()> {
    if r < 2 {
        return Err(CliError::Validation(format!("rank must be at least 2, got {r}")));
    }
    Ok(())
}

/// Largest `n(r-1)` for which the exact arrangement is enumerated.
pub const EXACT_CHAMBER_DIM: usize = 4;

fn cmd_chambers(args: &ChamberArgs, cx: &Context) -> CliResult<Value> {
    check_rank(args.rank)?;
    let walls = enumerate_walls(args.rank, args.points);
    let sampled = realized_sign_vectors(args.rank, args.points, &walls, args.samples, args.seed, cx.parallel).len();
    let exact = (args.points * (args.rank - 1) <= EXACT_CHAMBER_DIM).then(|| count_chambers(args.rank, args.points));
    if let Some(e) = exact {
        if sampled > e {
            return Err(CliError::Invariant(format!("{sampled} sampled sign vectors exceed {e} exact chambers")));
        }
    }
    Ok(json!({
        "r": args.rank,
        "n": args.points,
        "chambers": exact.unwrap_or(sampled),
        "exact": exact,
        "sampled": sampled,
        "samples": args.samples,
        "seed": args.seed,
        "walls": walls.len(),
    }))
}

fn default_weight(rank: usize, n: usize) -> CliResult<ParabolicWeight> {
    let center = weight_ac(rank, n);
    if n == 0 {
        return Ok(center);
    }
    let eps = center.boundary_distance() * BigRational::new(BigInt::from(1), BigInt::from(1000));
    Ok(perturb_general(&center, &eps)?)
}

fn cmd_dominant(args: &DominantArgs) -> CliResult<Value> {
    let a = match &args.weights {
        Some(src) => crate::format::weights_from_doc(&read_document::<WeightsDoc>(src)?, args.rank)?,
        None => {
            let r = args.rank.ok_or_else(|| missing("--rank", "without --weights"))?;
            check_rank(r)?;
            default_weight(r, args.points.ok_or_else(|| missing("--points", "without --weights"))?)?
        }
    };
    let mut out = json!({ "genus": args.genus, "weights": weights_to_doc(a.points()) });
    match is_dominant(args.genus, &a)? {
        Dominance::YesByTheorem(why) => out["dominant"] = json!(format!("yes-by-theorem: {why}")),
        Dominance::Yes { datum, bound } => {
            out["dominant"] = json!("yes");
            out["datum"] = json!(DatumDoc::from(&datum));
            out["bound"] = json!(rational_to_string(&bound));
        }
        Dominance::Inconclusive { datum, bound } => {
            out["dominant"] = json!("inconclusive");
            out["datum"] = json!(DatumDoc::from(&datum));
            out["bound"] = json!(rational_to_string(&bound));
        }
    }
    Ok(out)
}

fn divisor_of(args: &DivisorArgs) -> CliResult<DivisorClass> {
    if args.anticanonical {
        let r = args.rank.ok_or_else(|| missing("--rank", "with --anticanonical"))?;
        check_rank(r)?;
        return Ok(anticanonical_class(r, args.points.ok_or_else(|| missing("--points", "with --anticanonical"))?));
    }
    let src = args.divisor.as_ref().ok_or_else(|| missing("--divisor or --anticanonical", ""))?;
    let div = read_document::<DivisorDoc>(src)?.to_class(args.rank)?;
    if let Some(n) = args.points {
        if n != div.n() {
            return Err(CliError::Validation(format!("--points {n} but the divisor has {} points", div.n())));
        }
    }
    Ok(div)
}

fn position_name(p: ConePosition) -> &'static str {
    match p {
        ConePosition::Outside => "outside",
        ConePosition::Boundary => "boundary",
        ConePosition::Interior => "interior",
    }
}

fn cmd_cone(args: &DivisorArgs) -> CliResult<Value> {
    let div = divisor_of(args)?;
    let lw = divisor_to_level_weights(&div);
    Ok(json!({
        "divisor": DivisorDoc::from_class(&div),
        "r": div.rank(),
        "position": position_name(in_cone_e(&div)),
        "descends": descends(&div),
        "lambdas": lw.lambdas,
    }))
}

fn facet_json(f: &Facet) -> Value {
    match *f {
        Facet::Apex => json!({ "facet": "apex" }),
        Facet::LevelZero => json!({ "facet": "level-zero" }),
        Facet::FlagStep { point, step } => json!({ "facet": "flag-step", "point": point, "step": step }),
        Facet::FullColumn { point } => json!({ "facet": "full-column", "point": point }),
    }
}

fn cmd_model(args: &DivisorArgs) -> CliResult<Value> {
    let div = divisor_of(args)?;
    let position = in_cone_e(&div);
    let base = json!({ "divisor": DivisorDoc::from_class(&div), "r": div.rank(), "position": position_name(position) });
    let mut out = base;
    match projective_model_weight(&div) {
        Ok(w) => {
            out["kind"] = json!("weight");
            out["partial"] = json!(!w.is_full_flag());
            out["weight"] = json!(weights_to_doc(w.points()));
        }
        Err(Error::NotBig(_)) if position == ConePosition::Boundary => {
            let m = boundary_model_descriptor(&div)?;
            out["kind"] = json!("boundary");
            out["facets"] = Value::Array(m.facets.iter().map(facet_json).collect());
            out["twists"] = json!(m.twists);
            out["weight"] = json!(weights_to_doc(&m.weight));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

fn cmd_hilbert(args: &HilbertArgs, cx: &Context) -> CliResult<Value> {
    let graphs: Vec<StableGraph> = match args.catalog {
        Some(kind) => {
            let g = args.genus.ok_or_else(|| missing("--genus", "with --catalog"))?;
            let n = args.points.ok_or_else(|| missing("--points", "with --catalog"))?;
            let list = match kind {
                Catalog::Stable => stable_graphs(g, n),
                Catalog::Trivalent => trivalent_graphs(g, n),
            };
            if list.is_empty() {
                return Err(CliError::Validation(format!("no stable graphs of type ({g}, {n})")));
            }
            list
        }
        None => {
            if args.graph.is_empty() {
                return Err(missing("--graph or --catalog", "for hilbert"));
            }
            // labels come from the weight, so the rank only matters for parsing
            let parse_rank = args.rank.unwrap_or(2);
            let mut out = Vec::with_capacity(args.graph.len());
            for src in &args.graph {
                let g = read_document::<GraphDoc>(src)?.to_graph(parse_rank)?;
                if !g.labels.is_empty() {
                    return Err(CliError::Validation("hilbert graphs must be unlabeled".into()));
                }
                out.push(g);
            }
            out
        }
    };
    let kind = (graphs[0].genus(), graphs[0].n());
    if let Some(g) = graphs.iter().find(|g| (g.genus(), g.n()) != kind) {
        return Err(
            Error::MismatchedType(format!("(g, n) = ({}, {}) and ({}, {})", kind.0, kind.1, g.genus(), g.n())).into()
        );
    }
    let a = match &args.weights {
        Some(src) => crate::format::weights_from_doc(&read_document::<WeightsDoc>(src)?, args.rank)?,
        None if kind.1 == 0 => {
            let r = args.rank.ok_or_else(|| missing("--rank", "without --weights"))?;
            ParabolicWeight::new(r, vec![])?
        }
        None => return Err(missing("--weights", "for pointed graphs")),
    };
    if a.n() != kind.1 as usize {
        return Err(CliError::Validation(format!("graphs have {} legs but the weight has {} points", kind.1, a.n())));
    }
    let (l0, lambdas) = divisor_to_level_weights(&ray_generator(&a)?).to_partitions(a.rank())?;

    // one engine per degree, shared by all graphs
    let engines = (0..=args.max_degree)
        .map(|m| {
            let level = l0.checked_mul(m).ok_or_else(|| CliError::Validation(format!("level {l0}·{m} overflows")))?;
            CachedEngine::new(LevelContext::new(a.rank(), level)?, cx.cache.as_ref())
        })
        .collect::<CliResult<Vec<_>>>()?;
    let series = |graph: &StableGraph| -> CliResult<Vec<String>> {
        let mut h = Vec::with_capacity(engines.len());
        for (m, e) in (0u32..).zip(&engines) {
            let ws: Vec<_> = lambdas.iter().map(|w| w.scale(m)).collect();
            h.push(e.engine.graph_rank(graph, &WeightAssignment::from_list(l0 * m, &ws))?);
        }
        Ok(hilbert_to_doc(&h))
    };
    let vectors: Vec<Vec<String>> = if cx.parallel {
        graphs.par_iter().map(series).collect::<CliResult<_>>()?
    } else {
        graphs.iter().map(series).collect::<CliResult<_>>()?
    };
    for e in &engines {
        e.persist()?;
    }
    let flat = vectors.windows(2).all(|w| w[0] == w[1]);
    let per_graph: Vec<Value> =
        graphs.iter().zip(&vectors).map(|(g, h)| json!({ "graph_sha256": graph_hash(g), "hilbert": h })).collect();
    Ok(json!({
        "r": a.rank(),
        "genus": kind.0,
        "n": kind.1,
        "weights": weights_to_doc(a.points()),
        "ray_level": l0,
        "max_degree": args.max_degree,
        "flat": flat,
        "hilbert": vectors[0],
        "graphs": per_graph,
    }))
}

fn execute(cli: &Cli) -> CliResult<Value> {
    let cx = Context { cache: cli.cache_dir.as_ref().map(TableCache::open).transpose()?, parallel: cli.parallel };
    match &cli.command {
        Command::Rank(a) => cmd_rank(a, &cx),
        Command::Walls(a) => cmd_walls(a),
        Command::Chambers(a) => cmd_chambers(a, &cx),
        Command::Dominant(a) => cmd_dominant(a),
        Command::Cone(a) => cmd_cone(a),
        Command::Model(a) => cmd_model(a),
        Command::Hilbert(a) => cmd_hilbert(a, &cx),
    }
}

/// Parses arguments and runs one command. Panics inside a command are
/// reported as invariant breaches.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => {
                    let err = CliError::Validation(e.to_string().trim_end().to_string());
                    Outcome { code: err.exit_code(), stdout: pretty(&err.to_json()), stderr: String::new() }
                }
            };
        }
    };
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(|| execute(&cli)));
    let result = result.unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(CliError::Invariant(msg))
    });
    let stderr =
        if cli.verbose > 0 { format!("elapsed: {:.3}s\n", start.elapsed().as_secs_f64()) } else { String::new() };
    match result {
        Ok(v) => {
            let text = pretty(&v);
            match &cli.output {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Outcome { code: 0, stdout: String::new(), stderr },
                    Err(e) => {
                        let err = CliError::Io(format!("cannot write {}: {e}", path.display()));
                        Outcome { code: err.exit_code(), stdout: pretty(&err.to_json()), stderr }
                    }
                },
                None => Outcome { code: 0, stdout: text, stderr },
            }
        }
        Err(err) => Outcome { code: err.exit_code(), stdout: pretty(&err.to_json()), stderr },
    }
}
