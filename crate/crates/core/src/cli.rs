//! Command-line front end: argument parsing, corpus ingestion and report
//! emission for the other modules.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cover::{
    extend_precoloring, solve, CoverInstance, ListAssignment, MatchingAssignment, Perm, SolverOptions, Transversal,
};
use crate::discharge::{audit_with, explain, Account, AuditReport, AuditVerdict};
use crate::format::{CoverFile, FormatError, GraphFile, LoadedGraph};
use crate::planar::generate::{random_plane_graph, GeneratorParams};
use crate::planar::{
    butterfly_pattern, contains_pattern, cycle_predicates_with, extract_clusters_with, find_cycle_of_length,
    has_cycle_of_length, ClusterCatalog, Graph, PatternGraph, PlaneGraph,
};
use crate::reduce::cases::check_seven_cluster_cases;
use crate::reduce::{
    check_greedy_certificate, check_reducible, config_catalog, restraighten_each, verify_witness, ConfigFile,
    Configuration, EngineOptions, Mode, Strategy,
};

#[derive(Debug, Parser)]
#[command(name = "dpcolor", version, about = "Correspondence coloring of plane graphs")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Directory holding `clusters/` and `butterfly.json`.
    #[arg(long, global = true)]
    pub assets: Option<PathBuf>,
    /// Report zero for every timing field.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[arg(long, global = true, env = "DPCOLOR_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find a transversal, optionally extending a precoloring.
    Solve(SolveArgs),
    /// Report 7-cycles, butterflies and clusters.
    Detect { path: PathBuf },
    /// Decide a reducible configuration.
    ReduceCheck(ReduceArgs),
    /// Exhaustively confirm that an instance has no transversal.
    WitnessVerify {
        path: PathBuf,
        /// Also try straightening each non-identity edge on its own.
        #[arg(long)]
        diagnose: bool,
    },
    /// Discharging audit.
    #[command(subcommand)]
    Discharge(DischargeCommand),
    /// Batch filtering, audit and precoloring extension over a corpus.
    Corpus(CorpusArgs),
    /// Convert planar-generator ASCII output to newline-delimited graph files.
    ImportPlantri { path: PathBuf },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Cover file, or a graph file (straight matchings, full lists).
    pub path: PathBuf,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(2..=8))]
    pub k: u8,
    /// Precolored vertices, e.g. `0=1,1=2`.
    #[arg(long)]
    pub precolor: Option<String>,
    /// Replace the matchings of a graph file by random ones.
    #[arg(long)]
    pub random_matchings: Option<u64>,
    /// Split along separating good 3-cycles first.
    #[arg(long)]
    pub decompose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Full,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Branch,
    Product,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Catalog label or its prefix (`L4`, `CE-6`), or `all`.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub lemma: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    pub mode: ModeArg,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub count: u64,
    #[arg(long, default_value_t = 2_000_000_000)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Branch)]
    pub strategy: StrategyArg,
    #[arg(long)]
    pub no_symmetry: bool,
    #[arg(long)]
    pub no_straighten: bool,
    /// Also check the configuration's greedy proof, when it has one.
    #[arg(long)]
    pub certificate: bool,
    /// Also run the structural check of the 7-cluster case analysis.
    #[arg(long)]
    pub structure: bool,
}

#[derive(Debug, Subcommand)]
pub enum DischargeCommand {
    Audit { path: PathBuf },
    Explain {
        path: PathBuf,
        #[arg(long)]
        element: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusFilter {
    #[value(name = "no-7-cycles")]
    #[serde(rename = "no-7-cycles")]
    No7Cycles,
    NoButterfly,
    HasGoodTriangle,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Directory of graph files or a newline-delimited file.
    #[arg(required_unless_present = "generate")]
    pub path: Option<PathBuf>,
    /// Generate this many random graphs instead of reading a corpus.
    #[arg(long)]
    pub generate: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 12)]
    pub max_vertices: usize,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub filter: Vec<CorpusFilter>,
    #[arg(long)]
    pub audit: bool,
    /// Random matching assignments per graph for extending outer precolorings.
    #[arg(long, default_value_t = 0)]
    pub extend: usize,
}

/// Patterns and catalog, built in or read from `--assets`.
pub struct Assets {
    pub catalog: ClusterCatalog,
    pub butterfly: PatternGraph,
}

impl Assets {
    pub fn load(dir: Option<&Path>) -> Result<Assets> {
        let Some(dir) = dir else {
            return Ok(Assets { catalog: ClusterCatalog::builtin().clone(), butterfly: butterfly_pattern() });
        };
        let catalog = ClusterCatalog::from_dir(&dir.join("clusters"))
            .with_context(|| format!("reading catalog under {}", dir.display()))?;
        let text = fs::read_to_string(dir.join("butterfly.json")).context("reading butterfly.json")?;
        let g = GraphFile::from_json(&text)?.graph()?;
        Ok(Assets { catalog, butterfly: PatternGraph::new("butterfly", g)? })
    }
}

pub fn parse_graph_file(path: &Path) -> Result<LoadedGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = GraphFile::from_json(&text).with_context(|| path.display().to_string())?;
    file.load().with_context(|| path.display().to_string())
}

fn plane(path: &Path) -> Result<PlaneGraph> {
    match parse_graph_file(path)? {
        LoadedGraph::Plane(pg) => Ok(pg),
        LoadedGraph::Abstract(_) => bail!("{}: this command needs a rotation system", path.display()),
    }
}

/// Reads one line of planar-generator ASCII output: the vertex count, then
/// comma-separated neighbor lists in clockwise order, vertices named `a`, `b`, ...
pub fn parse_plantri_line(line: &str) -> Result<GraphFile> {
    let (count, lists) = line.trim().split_once(' ').context("expected `<n> <lists>`")?;
    let n: usize = count.parse().context("vertex count")?;
    let lists: Vec<&str> = lists.split(',').collect();
    if lists.len() != n {
        bail!("{} neighbor lists for {n} vertices", lists.len());
    }
    let mut rotation = BTreeMap::new();
    let mut edges = Vec::new();
    for (v, list) in lists.iter().enumerate() {
        let mut nbrs = Vec::new();
        for ch in list.chars() {
            let w = (ch as u32).wrapping_sub('a' as u32) as usize;
            if w >= n {
                bail!("neighbor `{ch}` out of range");
            }
            nbrs.push(w);
            if v < w {
                edges.push([v, w]);
            }
        }
        nbrs.reverse();
        rotation.insert(v.to_string(), nbrs);
    }
    let file = GraphFile { n, edges, rotation: Some(rotation), outer_face: None, labels: None, code: None };
    file.load()?;
    Ok(file)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestCounts {
    pub read: usize,
    pub unreadable: usize,
    pub rejected: BTreeMap<CorpusFilter, usize>,
    pub passed: usize,
}

/// A corpus entry that passed every filter.
pub struct CorpusGraph {
    pub name: String,
    pub graph: PlaneGraph,
}

fn good_outer(pg: &PlaneGraph, catalog: &ClusterCatalog) -> bool {
    let w = &pg.outer_face().walk;
    w.len() == 3 && cycle_predicates_with(pg, [w[0], w[1], w[2]], catalog).is_ok_and(|p| p.good)
}

/// The graph with a good 3-cycle as outer face: the designated one, or when
/// the file names none, the first triangular face that is a good 3-cycle.
fn with_good_outer(pg: PlaneGraph, designated: bool, catalog: &ClusterCatalog) -> Option<PlaneGraph> {
    if good_outer(&pg, catalog) {
        return Some(pg);
    }
    if designated {
        return None;
    }
    pg.faces()
        .iter()
        .filter(|f| f.degree() == 3)
        .map(|f| pg.with_outer(f.id))
        .find(|g| good_outer(g, catalog))
}

fn apply_filters(
    mut pg: PlaneGraph,
    designated: bool,
    filters: &[CorpusFilter],
    assets: &Assets,
) -> std::result::Result<PlaneGraph, CorpusFilter> {
    for &f in filters {
        match f {
            CorpusFilter::No7Cycles => {
                if has_cycle_of_length(pg.graph(), 7) {
                    return Err(f);
                }
            }
            CorpusFilter::NoButterfly => {
                if contains_pattern(pg.graph(), &assets.butterfly).is_some() {
                    return Err(f);
                }
            }
            CorpusFilter::HasGoodTriangle => match with_good_outer(pg, designated, &assets.catalog) {
                Some(g) => pg = g,
                None => return Err(f),
            },
        }
    }
    Ok(pg)
}

fn corpus_entries(path: &Path) -> Result<Vec<(String, std::result::Result<GraphFile, String>)>> {
    let mut files: Vec<PathBuf> = if path.is_dir() {
        fs::read_dir(path)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_file()).collect()
    } else {
        vec![path.to_path_buf()]
    };
    files.sort();
    let mut out = Vec::new();
    for file in files {
        let name = file.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let text = match fs::read_to_string(&file) {
            Ok(t) => t,
            Err(e) => {
                out.push((name, Err(e.to_string())));
                continue;
            }
        };
        let ext = file.extension().and_then(|e| e.to_str()).unwrap_or("");
        if matches!(ext, "ndjson" | "jsonl") {
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let parsed = GraphFile::from_json(line).map_err(|e| e.to_string());
                out.push((format!("{name}:{}", i + 1), parsed));
            }
        } else if ext == "json" {
            out.push((name, GraphFile::from_json(&text).map_err(|e| e.to_string())));
        }
    }
    Ok(out)
}

/// Reads a corpus and keeps the plane graphs passing every filter, in file
/// (and line) order. Unreadable entries are skipped with a warning.
pub fn ingest_corpus(path: &Path, filters: &[CorpusFilter], assets: &Assets) -> Result<(Vec<CorpusGraph>, IngestCounts)> {
    let mut counts = IngestCounts::default();
    let mut graphs = Vec::new();
    for (name, entry) in corpus_entries(path)? {
        counts.read += 1;
        let loaded = entry.and_then(|f| {
            let designated = f.outer_face.is_some();
            match f.load().map_err(|e: FormatError| e.to_string())? {
                LoadedGraph::Plane(pg) => Ok((pg, designated)),
                LoadedGraph::Abstract(_) => Err("no rotation system".to_string()),
            }
        });
        let (pg, designated) = match loaded {
            Ok(x) => x,
            Err(e) => {
                log::warn!("skipping {name}: {e}");
                counts.unreadable += 1;
                continue;
            }
        };
        match apply_filters(pg, designated, filters, assets) {
            Ok(graph) => {
                counts.passed += 1;
                graphs.push(CorpusGraph { name, graph });
            }
            Err(f) => *counts.rejected.entry(f).or_insert(0) += 1,
        }
    }
    Ok((graphs, counts))
}

/// Random matchings on every edge of `g`.
pub fn random_matchings(g: &Graph, k: u8, rng: &mut ChaCha8Rng) -> MatchingAssignment {
    let perms = Perm::all(k);
    let mut m = MatchingAssignment::identity(g, k);
    for e in g.edges() {
        let p = perms.choose(rng).expect("k >= 1").clone();
        m.set_perm(e.lo, e.hi, p).expect("edge of g");
    }
    m
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtensionSummary {
    pub trials: usize,
    pub precolorings: u64,
    pub extended: u64,
    /// Instances whose outer precoloring did not extend, with the
    /// precoloring as a partial transversal.
    pub failures: Vec<(CoverFile, Vec<Option<u8>>)>,
}

/// For `trials` random matching assignments with full 4-lists, tries every
/// proper precoloring of the outer triangle.
pub fn check_outer_extensions(pg: &PlaneGraph, seed: u64, trials: usize) -> ExtensionSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ExtensionSummary { trials, ..Default::default() };
    let outer = pg.outer_face().walk.clone();
    for _ in 0..trials {
        let m = random_matchings(pg.graph(), 4, &mut rng);
        let inst = CoverInstance::new(pg.graph().clone(), ListAssignment::full(pg.n(), 4), m).expect("full lists");
        for code in 0..64u32 {
            let mut phi = Transversal::empty(pg.n());
            for (i, &v) in outer.iter().enumerate() {
                phi.set(v, Some((code >> (2 * i) & 3) as u8 + 1));
            }
            let proper = outer.iter().enumerate().all(|(i, &a)| {
                outer[i + 1..].iter().all(|&b| {
                    !inst.graph().has_edge(a, b)
                        || !inst.conflicts(a, phi.get(a).unwrap(), b, phi.get(b).unwrap())
                })
            });
            if !proper {
                continue;
            }
            out.precolorings += 1;
            match extend_precoloring(&inst, &phi) {
                Ok(Some(_)) => out.extended += 1,
                _ => out.failures.push((CoverFile::from_instance(&inst, None, None), phi.colors().to_vec())),
            }
        }
    }
    out
}

/// Class membership re-check used when an extension fails.
pub fn in_class(pg: &PlaneGraph, assets: &Assets) -> bool {
    !has_cycle_of_length(pg.graph(), 7)
        && contains_pattern(pg.graph(), &assets.butterfly).is_none()
        && good_outer(pg, &assets.catalog)
}

fn parse_precolor(spec: &str, n: usize) -> Result<Transversal> {
    let mut t = Transversal::empty(n);
    for part in spec.split(',').filter(|s| !s.is_empty()) {
        let (v, c) = part.split_once('=').context("precolor entries look like `v=c`")?;
        let v: usize = v.trim().parse().context("precolor vertex")?;
        let c: u8 = c.trim().parse().context("precolor color")?;
        if v >= n {
            bail!("precolored vertex {v} out of range");
        }
        t.set(v, Some(c));
    }
    Ok(t)
}

fn load_instance(args: &SolveArgs) -> Result<(CoverInstance, Option<PlaneGraph>)> {
    let text = fs::read_to_string(&args.path).with_context(|| format!("reading {}", args.path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(FormatError::from)?;
    if value.get("sigma").is_some() {
        let file = CoverFile::from_json(&text)?;
        let pg = file.graph.load()?.plane().cloned();
        return Ok((file.to_instance()?, pg));
    }
    let loaded = GraphFile::from_json(&text)?.load()?;
    let g = loaded.graph().clone();
    let m = match args.random_matchings {
        Some(seed) => random_matchings(&g, args.k, &mut ChaCha8Rng::seed_from_u64(seed)),
        None => MatchingAssignment::identity(&g, args.k),
    };
    let inst = CoverInstance::new(g.clone(), ListAssignment::full(g.n(), args.k), m)?;
    Ok((inst, loaded.plane().cloned()))
}

fn find_configs(args: &ReduceArgs) -> Result<Vec<Configuration>> {
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let value: Value = serde_json::from_str(&text).map_err(FormatError::from)?;
        if value.get("sigma").is_some() {
            let file = CoverFile::from_json(&text)?;
            let label = file.label.clone().unwrap_or_else(|| path.display().to_string());
            return Ok(vec![crate::reduce::gadget_from_cover(&label, &file)?]);
        }
        return Ok(vec![ConfigFile::from_json(&text)?.build()?]);
    }
    let name = args.lemma.as_deref().expect("clap requires --lemma or --config");
    let cat = config_catalog();
    let picked: Vec<Configuration> = cat
        .into_values()
        .filter(|c| name == "all" || c.label == name || c.label.starts_with(&format!("{name}-")))
        .collect();
    if picked.is_empty() {
        bail!("no configuration named `{name}`");
    }
    Ok(picked)
}

fn emit(out: &mut dyn Write, format: OutputFormat, value: &Value, text: impl FnOnce() -> String) -> Result<()> {
    match format {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string(value)?)?,
        OutputFormat::Text => write!(out, "{}", text())?,
    }
    Ok(())
}

fn audit_summary(r: &AuditReport) -> String {
    let mut s = format!("verdict: {:?}\n", r.verdict);
    for v in r.class_checks.iter().chain(&r.lemma_preconditions) {
        s += &format!("  violated {}: {:?} {}\n", v.hypothesis, v.witness, v.detail);
    }
    s += &format!(
        "  sum {} -> {}; outer 1 + e - f3 = 1 + {} - {}: {}\n",
        r.initial_sum(),
        r.sum(),
        r.outer_identity.e,
        r.outer_identity.f3,
        if r.outer_identity.holds { "matches" } else { "MISMATCH" }
    );
    for a in &r.negative {
        s += &format!("  negative {a}: {}\n", crate::discharge::fraction(r.accounts[a]));
    }
    s
}

/// Executes one command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let assets = Assets::load(cli.assets.as_deref())?;
    let workers = cli.workers as usize;
    match &cli.command {
        Command::Solve(args) => {
            let (inst, pg) = load_instance(args)?;
            let phi = match &args.precolor {
                Some(s) => parse_precolor(s, inst.n())?,
                None => Transversal::empty(inst.n()),
            };
            phi.check(&inst).context("precoloring")?;
            let opts = SolverOptions { decompose_separating: args.decompose };
            let t = solve(&inst, &phi, pg.as_ref(), opts);
            let value = json!({
                "verdict": if t.is_some() { "FOUND" } else { "NONE" },
                "transversal": t.as_ref().map(|t| t.colors().to_vec()),
            });
            emit(out, cli.format, &value, || match &t {
                Some(t) => format!("FOUND {:?}\n", t.colors().iter().map(|c| c.unwrap_or(0)).collect::<Vec<_>>()),
                None => "NONE\n".to_string(),
            })
        }
        Command::Detect { path } => {
            let loaded = parse_graph_file(path)?;
            let g = loaded.graph();
            let seven = find_cycle_of_length(g, 7);
            let bfly = contains_pattern(g, &assets.butterfly);
            let clusters: Vec<Value> = match loaded.plane() {
                Some(pg) => extract_clusters_with(pg, &assets.catalog)
                    .iter()
                    .map(|c| json!({"id": c.id, "k": c.k(), "code": c.code(), "vertices": c.vertices}))
                    .collect(),
                None => Vec::new(),
            };
            let value = json!({"seven_cycle": seven, "butterfly": bfly, "clusters": clusters});
            emit(out, cli.format, &value, || {
                let mut s = format!("7-cycle: {seven:?}\nbutterfly: {bfly:?}\n");
                for c in &clusters {
                    s += &format!("cluster {} k={} code={} vertices={}\n", c["id"], c["k"], c["code"], c["vertices"]);
                }
                s
            })
        }
        Command::ReduceCheck(args) => {
            let mode = match args.mode {
                ModeArg::Full => Mode::Full,
                ModeArg::Sampled => {
                    let seed = args.seed.context("--mode sampled needs --seed")?;
                    Mode::Sampled { seed, count: args.count }
                }
            };
            let opts = EngineOptions {
                straighten: !args.no_straighten,
                symmetry: !args.no_symmetry,
                strategy: match args.strategy {
                    StrategyArg::Branch => Strategy::Branch,
                    StrategyArg::Product => Strategy::Product,
                },
                budget: args.budget,
                workers,
            };
            for cfg in find_configs(args)? {
                let mut verdict = check_reducible(&cfg, mode, &opts);
                if cli.no_timing {
                    verdict.seconds = 0.0;
                }
                let mut value = serde_json::to_value(&verdict)?;
                if args.certificate {
                    if let Some(rule) = &cfg.proof {
                        value["certificate"] = serde_json::to_value(check_greedy_certificate(&cfg, rule)?)?;
                    }
                }
                if args.structure && cfg.label == "L8-556" {
                    value["structure"] = serde_json::to_value(check_seven_cluster_cases())?;
                }
                emit(out, cli.format, &value, || {
                    let mut s = format!(
                        "{}: {:?} (enumerated {}, pruned {}, {:.3}s)\n",
                        verdict.label, verdict.status, verdict.enumerated, verdict.pruned, verdict.seconds
                    );
                    if let Some(n) = &verdict.note {
                        s += &format!("  {n}\n");
                    }
                    s
                })?;
            }
            Ok(())
        }
        Command::WitnessVerify { path, diagnose } => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file = CoverFile::from_json(&text)?;
            let inst = file.to_instance()?;
            let start = std::time::Instant::now();
            let verified = verify_witness(&inst);
            let seconds = if cli.no_timing { 0.0 } else { start.elapsed().as_secs_f64() };
            let candidates: u64 = (0..inst.n()).map(|v| inst.lists().mask(v).len() as u64).product();
            let mut value = json!({
                "label": file.label,
                "verified": verified,
                "candidates": candidates,
                "seconds": seconds,
            });
            let diag = if *diagnose { restraighten_each(&inst) } else { Vec::new() };
            if *diagnose {
                value["restraighten"] = diag
                    .iter()
                    .map(|(e, ok)| json!({"edge": format!("{}-{}", e.lo, e.hi), "colorable": ok}))
                    .collect();
            }
            emit(out, cli.format, &value, || {
                let mut s = format!(
                    "{}: {} ({candidates} candidates)\n",
                    file.label.as_deref().unwrap_or("instance"),
                    if verified { "no transversal" } else { "has a transversal" }
                );
                for (e, ok) in &diag {
                    s += &format!("  straighten {}-{}: {}\n", e.lo, e.hi, if *ok { "colorable" } else { "still blocked" });
                }
                s
            })
        }
        Command::Discharge(DischargeCommand::Audit { path }) => {
            let report = audit_with(&plane(path)?, &assets.catalog, &assets.butterfly);
            emit(out, cli.format, &serde_json::to_value(&report)?, || audit_summary(&report))
        }
        Command::Discharge(DischargeCommand::Explain { path, element }) => {
            let account: Account = element.parse()?;
            let report = audit_with(&plane(path)?, &assets.catalog, &assets.butterfly);
            if !report.initial.contains_key(&account) && !report.accounts.contains_key(&account) {
                bail!("no account {account} in this graph");
            }
            let history: Vec<_> = report.transfers.iter().filter(|t| t.from == account || t.to == account).collect();
            let value = json!({
                "element": account,
                "initial": report.initial.get(&account).copied().unwrap_or(0),
                "final": report.accounts.get(&account).copied().unwrap_or(0),
                "transfers": history,
            });
            emit(out, cli.format, &value, || explain(&report, account))
        }
        Command::Corpus(args) => run_corpus(cli, args, &assets, out),
        Command::ImportPlantri { path } => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let file = parse_plantri_line(line).with_context(|| format!("line {}", i + 1))?;
                writeln!(out, "{}", file.to_json())?;
            }
            Ok(())
        }
    }
}

fn run_corpus(cli: &Cli, args: &CorpusArgs, assets: &Assets, out: &mut dyn Write) -> Result<()> {
    let (graphs, counts) = match (args.generate, &args.path) {
        (Some(count), _) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let params = GeneratorParams { max_vertices: args.max_vertices, ..Default::default() };
            let mut counts = IngestCounts::default();
            let mut graphs = Vec::new();
            for i in 0..count {
                counts.read += 1;
                let pg = random_plane_graph(&mut rng, &params, &assets.butterfly);
                match apply_filters(pg, true, &args.filter, assets) {
                    Ok(graph) => {
                        counts.passed += 1;
                        graphs.push(CorpusGraph { name: format!("generated-{i}"), graph });
                    }
                    Err(f) => *counts.rejected.entry(f).or_insert(0) += 1,
                }
            }
            (graphs, counts)
        }
        (None, Some(path)) => ingest_corpus(path, &args.filter, assets)?,
        (None, None) => bail!("give a corpus path or --generate"),
    };
    let mut verdicts: BTreeMap<String, usize> = BTreeMap::new();
    let (mut exact, mut identity, mut caps) = (0usize, 0usize, 0usize);
    let mut ext = ExtensionSummary::default();
    let mut out_of_class = 0usize;
    for (i, cg) in graphs.iter().enumerate() {
        if args.audit {
            let r = audit_with(&cg.graph, &assets.catalog, &assets.butterfly);
            *verdicts.entry(format!("{:?}", r.verdict)).or_insert(0) += 1;
            exact += usize::from(r.sum() == 0 && r.initial_sum() == 0);
            identity += usize::from(r.outer_identity.holds);
            caps += usize::from(r.cap_violations.is_empty());
            debug_assert!(r.verdict != AuditVerdict::Discharged || r.negative.is_empty());
        }
        if args.extend > 0 {
            let s = check_outer_extensions(&cg.graph, args.seed.wrapping_add(i as u64), args.extend);
            ext.trials += s.trials;
            ext.precolorings += s.precolorings;
            ext.extended += s.extended;
            if !s.failures.is_empty() && !in_class(&cg.graph, assets) {
                out_of_class += 1;
            } else {
                ext.failures.extend(s.failures);
            }
        }
    }
    let value = json!({
        "ingest": counts,
        "audit": if args.audit { json!({"verdicts": verdicts, "sum_zero": exact, "outer_identity": identity, "caps_hold": caps}) } else { Value::Null },
        "extension": if args.extend > 0 { json!({"trials": ext.trials, "precolorings": ext.precolorings, "extended": ext.extended, "none": ext.failures.len(), "none_outside_class": out_of_class}) } else { Value::Null },
    });
    emit(out, cli.format, &value, || {
        let mut s = format!("read {}  passed {}  unreadable {}\n", counts.read, counts.passed, counts.unreadable);
        for (f, n) in &counts.rejected {
            s += &format!("  rejected by {f:?}: {n}\n");
        }
        if args.audit {
            for (v, n) in &verdicts {
                s += &format!("  {v:<20} {n}\n");
            }
            s += &format!("  sum zero {exact}/{0}  outer identity {identity}/{0}  caps {caps}/{0}\n", graphs.len());
        }
        if args.extend > 0 {
            s += &format!(
                "  precolorings {}  extended {}  none {}\n",
                ext.precolorings,
                ext.extended,
                ext.failures.len()
            );
        }
        s
    })
}
