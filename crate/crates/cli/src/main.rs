//! `osmag` command-line tool.
//!
//! Exit codes: 0 success, 1 the map has validation errors, 2 usage error,
//! 3 runtime failure (I/O, malformed XML, no path).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use osmag::geo::LocalPoint;
use osmag::io::{parse_osm, serialize, OsmDocument};
use osmag::merge::{merge_documents, MergeError, DEFAULT_THRESHOLD};
use osmag::model::{validate, Diagnostic, MapModel, ModelError, Severity};
use osmag::planner::{
    build_passage_graph, precompute_hierarchy, CacheFile, CapabilityProfile, GeoPoint, HierarchicalCostIndex,
    PassageGraph, Planner, Route,
};
use osmag::raster::DEFAULT_RESOLUTION;
use osmag::render::{render_svg, HeightBand, RenderStyle};

#[derive(Parser)]
#[command(name = "osmag", version, about = "Inspect, validate, merge, render and plan on osmAG maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a map and print one line per diagnostic.
    Validate {
        file: PathBuf,
        /// One JSON object per line.
        #[arg(long)]
        json: bool,
    },
    /// Print element counts and hierarchy statistics.
    Info {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Plan a route between two points.
    Plan(PlanArgs),
    /// Draw a map level as SVG.
    Render(RenderArgs),
    /// Merge map B into map A.
    Merge {
        a: PathBuf,
        b: PathBuf,
        /// Weld nodes of B closer than this to a node of A (m).
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build the passage graph and hierarchy tables and store them.
    Precompute {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: f64,
        /// Cache file; defaults to `<file>.cache.json`.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct PlanArgs {
    file: PathBuf,
    /// `lat,lon[,height]`, or `x,y[,height]` with `--local`.
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    /// Read `--from`/`--to` as meters in the map's local frame.
    #[arg(long)]
    local: bool,
    /// Built-in profile (`default`, `wheeled`, `legged`) or a TOML file.
    #[arg(long, default_value = "default")]
    profile: String,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: f64,
    /// Search leaf by leaf without the precomputed tables.
    #[arg(long)]
    no_hierarchy: bool,
    /// Reuse (or create) a precompute cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Also draw the route on the start level.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderArgs {
    file: PathBuf,
    /// Draw only areas within 0.5 m of this height.
    #[arg(long, conflicts_with = "band")]
    level: Option<f64>,
    /// Draw only areas with height in `min,max`.
    #[arg(long, allow_hyphen_values = true)]
    band: Option<String>,
    #[arg(short, long)]
    out: PathBuf,
    /// Overlay a route given as `from/to` (same syntax as `plan`).
    #[arg(long, allow_hyphen_values = true)]
    route: Option<String>,
    #[arg(long)]
    local: bool,
    #[arg(long, default_value = "default")]
    profile: String,
    /// TOML style file.
    #[arg(long)]
    style: Option<PathBuf>,
    #[arg(long)]
    no_labels: bool,
}

/// A failed command: exit code and message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure { code: 2, message: m.into() }
    }

    fn runtime(m: impl Into<String>) -> Self {
        Failure { code: 3, message: m.into() }
    }

    fn invalid(m: impl Into<String>) -> Self {
        Failure { code: 1, message: m.into() }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file, json } => cmd_validate(&file, json),
        Command::Info { file, json } => cmd_info(&file, json),
        Command::Plan(args) => cmd_plan(&args),
        Command::Render(args) => cmd_render(&args),
        Command::Merge { a, b, threshold, out, json } => cmd_merge(&a, &b, threshold, &out, json),
        Command::Precompute { file, resolution, out, json } => cmd_precompute(&file, resolution, out, json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn parse(path: &Path, bytes: &[u8]) -> Result<OsmDocument, Failure> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Ok(OsmDocument::default());
    }
    parse_osm(bytes).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn build(doc: &OsmDocument) -> Result<MapModel, Failure> {
    MapModel::build(doc).map_err(|e| Failure::invalid(format!("{} {}: {e}", e.code(), e.subject())))
}

fn load(path: &Path) -> Result<(Vec<u8>, MapModel), Failure> {
    let bytes = read(path)?;
    let model = build(&parse(path, &bytes)?)?;
    Ok((bytes, model))
}

fn build_error(e: &ModelError) -> Diagnostic {
    Diagnostic { severity: Severity::Error, code: e.code(), subject: e.subject(), message: e.to_string() }
}

fn diagnostic_json(d: &Diagnostic) -> serde_json::Value {
    json!({ "severity": d.severity.to_string(), "code": d.code, "subject": d.subject, "message": d.message })
}

fn print_diagnostics(diags: &[Diagnostic], as_json: bool) {
    for d in diags {
        if as_json {
            println!("{}", diagnostic_json(d));
        } else {
            println!("{d}");
        }
    }
}

fn cmd_validate(file: &Path, as_json: bool) -> Outcome {
    let bytes = read(file)?;
    let doc = parse(file, &bytes)?;
    let diags = match MapModel::build(&doc) {
        Ok(m) => validate(&m),
        Err(e) => vec![build_error(&e)],
    };
    print_diagnostics(&diags, as_json);
    Ok(if diags.iter().any(Diagnostic::is_error) { 1 } else { 0 })
}

fn cmd_info(file: &Path, as_json: bool) -> Outcome {
    let (_, m) = load(file)?;
    let levels = m.height_levels();
    let info = json!({
        "nodes": m.nodes().len(),
        "areas": m.areas().len(),
        "passages": m.passages().len(),
        "trees": m.tree_roots().len(),
        "depth": m.max_depth(),
        "inner_area_m2": (m.inner_leaf_area() * 100.0).round() / 100.0,
        "height_levels": levels,
    });
    if as_json {
        println!("{info}");
    } else {
        println!("nodes: {}", m.nodes().len());
        println!("areas: {}", m.areas().len());
        println!("passages: {}", m.passages().len());
        println!("trees: {}", m.tree_roots().len());
        println!("depth: {}", m.max_depth());
        println!("inner area: {:.2} m2", m.inner_leaf_area());
        let ls: Vec<String> = levels.iter().map(|h| format!("{h}")).collect();
        println!("height levels: {}", if ls.is_empty() { "-".to_string() } else { ls.join(", ") });
    }
    Ok(0)
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.parse::<f64>()).collect();
    match nums.as_deref() {
        Ok([a, b]) => Ok((*a, *b, 0.0)),
        Ok([a, b, h]) => Ok((*a, *b, *h)),
        _ => Err(Failure::usage(format!("expected `a,b[,height]`, got `{s}`"))),
    }
}

fn load_profile(name: &str) -> Result<CapabilityProfile, Failure> {
    if let Ok(p) = CapabilityProfile::builtin(name) {
        return Ok(p);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(Failure::usage(format!("`{name}` is neither a built-in profile nor a file")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::runtime(format!("{name}: {e}")))?;
    CapabilityProfile::from_toml(&text).map_err(|e| Failure::usage(format!("{name}: {e}")))
}

fn precompute(
    model: &MapModel,
    bytes: &[u8],
    resolution: f64,
    cache: Option<&Path>,
) -> Result<(PassageGraph, HierarchicalCostIndex), Failure> {
    if let Some(path) = cache {
        if let Ok(Some(c)) = CacheFile::load_fresh(path, bytes, resolution) {
            return Ok((c.graph, c.index));
        }
    }
    let graph = build_passage_graph(model, resolution).map_err(|e| Failure::runtime(e.to_string()))?;
    let index = precompute_hierarchy(model, &graph);
    if let Some(path) = cache {
        CacheFile::new(bytes, graph.clone(), index.clone()).save(path).map_err(|e| Failure::runtime(e.to_string()))?;
    }
    Ok((graph, index))
}

fn plan_route(planner: &Planner, from: &str, to: &str, local: bool) -> Result<Route, Failure> {
    let (a, b, ha) = parse_triple(from)?;
    let (c, d, hb) = parse_triple(to)?;
    let result = if local {
        planner.plan_local(LocalPoint::new(a, b), ha, LocalPoint::new(c, d), hb)
    } else {
        planner.plan(GeoPoint { lat: a, lon: b, height: ha }, GeoPoint { lat: c, lon: d, height: hb })
    };
    result.map_err(|e| Failure::runtime(e.to_string()))
}

/// `area [passage] area [passage] ...`
fn route_line(r: &Route) -> String {
    let mut parts = Vec::new();
    for (i, leg) in r.legs.iter().enumerate() {
        if i > 0 {
            parts.push(format!("[{}]", leg.entry));
        }
        parts.push(leg.area.clone());
    }
    parts.join(" ")
}

fn cmd_plan(args: &PlanArgs) -> Outcome {
    let (bytes, model) = load(&args.file)?;
    let profile = load_profile(&args.profile)?;
    let (graph, index) = precompute(&model, &bytes, args.resolution, args.cache.as_deref())?;
    let planner = Planner::new(&model, &graph, (!args.no_hierarchy).then_some(&index), profile);
    let t = Instant::now();
    let route = plan_route(&planner, &args.from, &args.to, args.local)?;
    let elapsed = t.elapsed();

    if args.json {
        let legs: Vec<_> = route
            .legs
            .iter()
            .map(|l| json!({ "area": l.area, "entry": l.entry, "exit": l.exit, "cost_m": l.cost.meters() }))
            .collect();
        println!(
            "{}",
            json!({
                "total_cost_m": route.total_cost,
                "areas": route.areas(),
                "passages": route.passages_crossed,
                "legs": legs,
                "shortcuts": route.shortcuts,
                "query_us": elapsed.as_micros() as u64,
            })
        );
    } else {
        println!("route: {}", route_line(&route));
        println!("passages: {}", route.passages_crossed.join(", "));
        println!("total: {:.2} m", route.total_cost);
        println!("query: {} us, {} shortcut(s)", elapsed.as_micros(), route.shortcuts);
    }
    if let Some(svg) = &args.svg {
        let h = route.legs.first().map_or(0.0, |l| model.areas()[&l.area].height);
        let style = RenderStyle { band: Some(HeightBand::level(h)), ..Default::default() };
        write_svg(&model, &style, Some(&route), svg)?;
    }
    Ok(0)
}

fn write_svg(model: &MapModel, style: &RenderStyle, route: Option<&Route>, out: &Path) -> Result<(), Failure> {
    let svg = render_svg(model, style, route).map_err(|e| Failure::runtime(e.to_string()))?;
    std::fs::write(out, svg).map_err(|e| Failure::runtime(format!("{}: {e}", out.display())))
}

fn cmd_render(args: &RenderArgs) -> Outcome {
    let (bytes, model) = load(&args.file)?;
    let mut style = match &args.style {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::runtime(format!("{}: {e}", p.display())))?;
            RenderStyle::from_toml(&text).map_err(|e| Failure::usage(e.to_string()))?
        }
        None => RenderStyle::default(),
    };
    if let Some(h) = args.level {
        style.band = Some(HeightBand::level(h));
    }
    if let Some(b) = &args.band {
        let (min, max, _) = parse_triple(b)?;
        style.band = Some(HeightBand { min, max });
    }
    if args.no_labels {
        style.labels = false;
    }
    let route = match &args.route {
        Some(r) => {
            let (from, to) = r.split_once('/').ok_or_else(|| Failure::usage("--route expects `from/to`"))?;
            let profile = load_profile(&args.profile)?;
            let (graph, index) = precompute(&model, &bytes, DEFAULT_RESOLUTION, None)?;
            let planner = Planner::new(&model, &graph, Some(&index), profile);
            Some(plan_route(&planner, from, to, args.local)?)
        }
        None => None,
    };
    write_svg(&model, &style, route.as_ref(), &args.out)?;
    Ok(0)
}

fn cmd_merge(a: &Path, b: &Path, threshold: f64, out: &Path, as_json: bool) -> Outcome {
    if !(threshold >= 0.0) {
        return Err(Failure::usage("--threshold must be non-negative"));
    }
    let da = parse(a, &read(a)?)?;
    let db = parse(b, &read(b)?)?;
    match merge_documents(&da, &db, threshold) {
        Ok((model, report)) => {
            std::fs::write(out, serialize(&model)).map_err(|e| Failure::runtime(format!("{}: {e}", out.display())))?;
            if as_json {
                println!(
                    "{}",
                    json!({
                        "consolidated_node_pairs": report.consolidated_node_pairs,
                        "renamed_ids": report.renamed_ids,
                        "renumbered_nodes": report.renumbered_nodes.len(),
                        "renumbered_ways": report.renumbered_ways.len(),
                    })
                );
            } else {
                println!("consolidated node pairs: {}", report.consolidated_node_pairs);
                for (old, new) in &report.renamed_ids {
                    println!("renamed {old} -> {new}");
                }
                println!(
                    "renumbered: {} node(s), {} way(s)",
                    report.renumbered_nodes.len(),
                    report.renumbered_ways.len()
                );
            }
            print_diagnostics(&report.conflicts, as_json);
            Ok(0)
        }
        Err(MergeError::ValidationFailed { diagnostics, .. }) => {
            print_diagnostics(&diagnostics, as_json);
            Err(Failure::invalid("merged map is not valid; nothing written"))
        }
        Err(MergeError::Model(e)) => {
            print_diagnostics(&[build_error(&e)], as_json);
            Err(Failure::invalid("merged map is not valid; nothing written"))
        }
        Err(e) => Err(Failure::runtime(e.to_string())),
    }
}

fn cmd_precompute(file: &Path, resolution: f64, out: Option<PathBuf>, as_json: bool) -> Outcome {
    if !(resolution > 0.0) {
        return Err(Failure::usage("--resolution must be positive"));
    }
    let (bytes, model) = load(file)?;
    let out = out.unwrap_or_else(|| {
        let mut p = file.as_os_str().to_owned();
        p.push(".cache.json");
        PathBuf::from(p)
    });
    if let Ok(Some(_)) = CacheFile::load_fresh(&out, &bytes, resolution) {
        if as_json {
            println!("{}", json!({ "cache": out.display().to_string(), "status": "valid" }));
        } else {
            println!("cache valid: {}", out.display());
        }
        return Ok(0);
    }
    let t = Instant::now();
    let graph = build_passage_graph(&model, resolution).map_err(|e| Failure::runtime(e.to_string()))?;
    let t_graph = t.elapsed();
    let index = precompute_hierarchy(&model, &graph);
    let t_total = t.elapsed();
    CacheFile::new(&bytes, graph.clone(), index).save(&out).map_err(|e| Failure::runtime(e.to_string()))?;
    if as_json {
        println!(
            "{}",
            json!({
                "cache": out.display().to_string(),
                "status": "written",
                "vertices": graph.vertex_count(),
                "edges": graph.edge_count(),
                "graph_ms": t_graph.as_secs_f64() * 1e3,
                "total_ms": t_total.as_secs_f64() * 1e3,
            })
        );
    } else {
        println!("passage graph: {} vertices, {} edges", graph.vertex_count(), graph.edge_count());
        println!("precompute: {:.1} ms (graph {:.1} ms)", t_total.as_secs_f64() * 1e3, t_graph.as_secs_f64() * 1e3);
        println!("cache written: {}", out.display());
    }
    Ok(0)
}
