use crate::dot;
use crate::output::{self, verdict_json};
use clap::{Args, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::PathBuf;
use std::sync::Arc;
use tropls_core::dependence::{
    decide_dependence, exhaustive_dependence_3, verify_combination, DependenceAnswer,
};
use tropls_core::divisor::Divisor;
use tropls_core::error::{Error, Result};
use tropls_core::graph::{MetricGraph, Point, TangentVector};
use tropls_core::json as cj;
use tropls_core::matroid::{bergman_membership, TropicalPoint, ValuatedMatroid};
use tropls_core::morphism;
use tropls_core::plfn::PLFunction;
use tropls_core::rank;
use tropls_core::rational::{format_rational, parse_rational};
use tropls_core::submodule::TropicalSubmodule;
use tropls_core::tls;
use tropls_core::fixtures;

fn seed() -> u64 {
    std::env::var("TROPLS_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x7509)
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &PathBuf) -> Result<Arc<MetricGraph>> {
    cj::graph_from_json(&read_json(path)?)
}

fn load_divisor(g: &Arc<MetricGraph>, path: &PathBuf) -> Result<Divisor> {
    cj::divisor_from_json(g, &read_json(path)?)
}

fn load_function(g: &Arc<MetricGraph>, path: &PathBuf) -> Result<PLFunction> {
    cj::plfn_from_json(g, &read_json(path)?)
}

fn load_module(g: &Arc<MetricGraph>, path: &PathBuf) -> Result<TropicalSubmodule> {
    cj::module_from_json(g, &read_json(path)?)
}

fn parse_point(g: &Arc<MetricGraph>, s: &str) -> Result<Point> {
    let dto: cj::PointDto =
        serde_json::from_str(s).map_err(|e| Error::input(format!("point {s:?}: {e}")))?;
    cj::point_from_json(g, &dto)
}

// ---------------------------------------------------------------- rank

#[derive(Args)]
pub struct RankArgs {
    #[arg(short = 'g', long)]
    graph: PathBuf,
    #[arg(short = 'd', long)]
    divisor: PathBuf,
    #[arg(long)]
    json: bool,
}

pub fn rank(a: RankArgs) -> Result<i32> {
    let g = load_graph(&a.graph)?;
    let d = load_divisor(&g, &a.divisor)?;
    let r = rank::bn_rank(&d)?;
    if a.json {
        output::print(&json!({"command": "rank", "rank": r}));
    } else {
        println!("rank {r}");
    }
    Ok(0)
}

// -------------------------------------------------------------- reduce

#[derive(Args)]
pub struct ReduceArgs {
    #[arg(short = 'g', long)]
    graph: PathBuf,
    #[arg(short = 'd', long)]
    divisor: PathBuf,
    /// Base point, e.g. '{"vertex":"v"}' or '{"edge":"e","t":"1/2"}'.
    #[arg(long)]
    base: String,
    #[arg(long)]
    json: bool,
}

pub fn reduce(a: ReduceArgs) -> Result<i32> {
    let g = load_graph(&a.graph)?;
    let d = load_divisor(&g, &a.divisor)?;
    let q = parse_point(&g, &a.base)?;
    let r = rank::dhar_reduce(&d, &q)?;
    if a.json {
        output::print(&json!({
            "command": "reduce",
            "reduced": cj::divisor_to_json(&r.reduced),
            "witness": cj::plfn_to_json(&r.witness),
        }));
    } else {
        println!("reduced: {}", r.reduced.describe());
    }
    Ok(0)
}

// ----------------------------------------------------------------- dep

#[derive(Args)]
pub struct DepArgs {
    #[command(subcommand)]
    sub: DepCmd,
}

#[derive(Subcommand)]
enum DepCmd {
    /// Search for a dependence among the given functions.
    Decide {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'f', long = "function", required = true)]
        functions: Vec<PathBuf>,
        /// Use the exhaustive three-function oracle instead of the raising
        /// loop.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        json: bool,
    },
    /// Classify one tropical combination exactly.
    Verify {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'f', long = "function", required = true)]
        functions: Vec<PathBuf>,
        /// Comma-separated rational offsets, e.g. "0,3,1/2".
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        json: bool,
    },
}

pub fn dep(a: DepArgs) -> Result<i32> {
    match a.sub {
        DepCmd::Decide {
            graph,
            functions,
            exhaustive,
            json,
        } => {
            let g = load_graph(&graph)?;
            let fns = functions
                .iter()
                .map(|p| load_function(&g, p))
                .collect::<Result<Vec<_>>>()?;
            let ans = if exhaustive {
                exhaustive_dependence_3(&fns)?
            } else {
                decide_dependence(&fns)?
            };
            let (code, value) = output::dependence_json(&g, &ans);
            if json {
                output::print(&value);
            } else {
                match &ans {
                    DependenceAnswer::Dependent { coeffs, .. } => {
                        let cs: Vec<String> = coeffs.iter().map(format_rational).collect();
                        println!("dependent with coefficients ({})", cs.join(", "));
                    }
                    DependenceAnswer::Independent { certificate, .. } => {
                        match certificate {
                            Some(_) => println!("independent (certificate found)"),
                            None => println!("independent (by exhaustion)"),
                        }
                    }
                    DependenceAnswer::Undetermined { .. } => println!("undetermined"),
                }
            }
            Ok(code)
        }
        DepCmd::Verify {
            graph,
            functions,
            coeffs,
            json,
        } => {
            let g = load_graph(&graph)?;
            let fns = functions
                .iter()
                .map(|p| load_function(&g, p))
                .collect::<Result<Vec<_>>>()?;
            let cs = coeffs
                .split(',')
                .map(|s| parse_rational(s.trim()))
                .collect::<Result<Vec<_>>>()?;
            let verdict = verify_combination(&fns, &cs)?;
            let (code, value) = verdict_json(&g, &verdict);
            if json {
                output::print(&value);
            } else {
                println!("{}", value["kind"].as_str().unwrap_or("?"));
            }
            Ok(code)
        }
    }
}

// -------------------------------------------------------------- module

#[derive(Args)]
pub struct ModuleArgs {
    #[command(subcommand)]
    sub: ModuleCmd,
}

#[derive(Subcommand)]
enum ModuleCmd {
    /// Residuation membership of a function.
    Member {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'm', long)]
        module: PathBuf,
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Drop generators expressible through the others.
    Minimize {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'm', long)]
        module: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Slope vectors: at one tangent, or over the whole slope subdivision.
    Slopes {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'm', long)]
        module: PathBuf,
        /// Edge id of the tangent base.
        #[arg(long)]
        edge: Option<String>,
        /// Offset of the tangent base along the edge.
        #[arg(long)]
        at: Option<String>,
        /// Point the tangent toward the edge tail instead of the head.
        #[arg(long)]
        backward: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exact covered locus of the module.
    Cover {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'm', long)]
        module: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

pub fn module(a: ModuleArgs) -> Result<i32> {
    match a.sub {
        ModuleCmd::Member {
            graph,
            module,
            function,
            json,
        } => {
            let g = load_graph(&graph)?;
            let m = load_module(&g, &module)?;
            let f = load_function(&g, &function)?;
            let coeffs = m.membership(&f)?;
            let code = if coeffs.is_some() { 0 } else { 1 };
            if json {
                output::print(&json!({
                    "command": "module member",
                    "member": coeffs.is_some(),
                    "coeffs": coeffs.map(|cs| cs.iter().map(format_rational).collect::<Vec<_>>()),
                }));
            } else if let Some(cs) = coeffs {
                let cs: Vec<String> = cs.iter().map(format_rational).collect();
                println!("member with coefficients ({})", cs.join(", "));
            } else {
                println!("not a member");
            }
            Ok(code)
        }
        ModuleCmd::Minimize { graph, module, json } => {
            let g = load_graph(&graph)?;
            let m = load_module(&g, &module)?.minimize_generators()?;
            if json {
                output::print(&json!({
                    "command": "module minimize",
                    "module": cj::module_to_json(&m),
                }));
            } else {
                println!("{} minimal generators", m.generators().len());
            }
            Ok(0)
        }
        ModuleCmd::Slopes {
            graph,
            module,
            edge,
            at,
            backward,
            json,
        } => {
            let g = load_graph(&graph)?;
            let m = load_module(&g, &module)?;
            if let (Some(edge), Some(at)) = (edge, at) {
                let ei = g.edge_index(&edge)?;
                let base = g.point_on_edge(ei, parse_rational(&at)?)?;
                let zeta = TangentVector {
                    base,
                    edge: ei,
                    toward_head: !backward,
                };
                let sv = m.slope_vector(&zeta);
                if json {
                    output::print(&json!({"command": "module slopes", "slopes": sv.slopes}));
                } else {
                    println!("{:?}", sv.slopes);
                }
            } else {
                let (_, table) = tls::slope_count_check(&m, 0)?;
                if json {
                    let rows: Vec<_> = table
                        .iter()
                        .map(|(label, slopes)| json!({"tangent": label, "slopes": slopes}))
                        .collect();
                    output::print(&json!({"command": "module slopes", "table": rows}));
                } else {
                    for (label, slopes) in table {
                        println!("{label}: {slopes:?}");
                    }
                }
            }
            Ok(0)
        }
        ModuleCmd::Cover { graph, module, json } => {
            let g = load_graph(&graph)?;
            let m = load_module(&g, &module)?;
            let locus = m.covered_locus();
            let all = locus.is_all();
            if json {
                let edges: Vec<_> = locus
                    .edge_intervals
                    .iter()
                    .enumerate()
                    .map(|(ei, ivals)| {
                        json!({
                            "edge": g.edges()[ei].id,
                            "intervals": ivals
                                .iter()
                                .map(|(a, b)| vec![format_rational(a), format_rational(b)])
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                output::print(&json!({
                    "command": "module cover",
                    "complete": all,
                    "exhaustive": locus.exhaustive,
                    "edges": edges,
                }));
            } else if all {
                println!("covers the whole graph");
            } else {
                let p = locus.uncovered_point().unwrap();
                println!("uncovered point: {}", g.describe_point(&p));
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

// ----------------------------------------------------------------- tls

#[derive(Args)]
pub struct TlsArgs {
    #[command(subcommand)]
    sub: TlsCmd,
}

#[derive(Subcommand)]
enum TlsCmd {
    /// Run the rank-r axiom checks.
    Verify {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'm', long)]
        module: PathBuf,
        #[arg(long)]
        rank: i64,
        /// Samples for the coverage axiom at rank >= 2.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Witness subseries for the filtration axiom.
        #[arg(long)]
        witness: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// The classified rank-1 series on an interval with a degree-2 divisor.
    GenerateRank1 {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'd', long)]
        divisor: PathBuf,
        /// Divisor point of the flattest extremal member, as a point JSON.
        #[arg(long)]
        w0: String,
        /// Divisor point of the steepest extremal member.
        #[arg(long)]
        w1: String,
        #[arg(long)]
        json: bool,
    },
    /// Search for an independent forced triple refuting rank-1 series.
    ObstructRank1 {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'd', long)]
        divisor: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Restrict a series to a closed connected subgraph.
    Restrict {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'm', long)]
        module: PathBuf,
        #[arg(long)]
        subgraph: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

pub fn tls(a: TlsArgs) -> Result<i32> {
    match a.sub {
        TlsCmd::Verify {
            graph,
            module,
            rank,
            samples,
            witness,
            json,
        } => {
            let g = load_graph(&graph)?;
            let m = load_module(&g, &module)?;
            let witnesses = witness
                .iter()
                .map(|p| load_module(&g, p))
                .collect::<Result<Vec<_>>>()?;
            let w = if witnesses.is_empty() {
                None
            } else {
                Some(witnesses.as_slice())
            };
            let report = tls::verify_tls(&m, rank, samples, &mut rng(), w)?;
            let code = output::tls_report(&g, &report, json);
            Ok(code)
        }
        TlsCmd::GenerateRank1 {
            graph,
            divisor,
            w0,
            w1,
            json,
        } => {
            let g = load_graph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            let w0 = parse_point(&g, &w0)?;
            let w1 = parse_point(&g, &w1)?;
            let m = tls::interval_rank1_builder(&g, &d, &w0, &w1)?;
            if json {
                output::print(&json!({
                    "command": "tls generate-rank1",
                    "module": cj::module_to_json(&m),
                }));
            } else {
                println!("{} generators", m.generators().len());
            }
            Ok(0)
        }
        TlsCmd::ObstructRank1 { graph, divisor, json } => {
            let g = load_graph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            let r = rank::bn_rank(&d)?;
            if r < 1 {
                return Err(Error::input(format!("divisor has rank {r} < 1")));
            }
            match tls::rank1_obstruction(&d)? {
                Some(w) => {
                    if json {
                        output::print(&json!({
                            "command": "tls obstruct-rank1",
                            "found": true,
                            "points": w.points.iter().map(|p| cj::point_to_json(&g, p)).collect::<Vec<_>>(),
                            "functions": w.functions.iter().map(cj::plfn_to_json).collect::<Vec<_>>(),
                        }));
                    } else {
                        let pts: Vec<String> =
                            w.points.iter().map(|p| g.describe_point(p)).collect();
                        println!(
                            "independent forced triple through {}: no rank-1 series",
                            pts.join(", ")
                        );
                    }
                    Ok(0)
                }
                None => {
                    if json {
                        output::print(&json!({"command": "tls obstruct-rank1", "found": false}));
                    } else {
                        println!("no obstruction found");
                    }
                    Ok(1)
                }
            }
        }
        TlsCmd::Restrict {
            graph,
            module,
            subgraph,
            json,
        } => {
            let g = load_graph(&graph)?;
            let m = load_module(&g, &module)?;
            let spec = cj::subgraph_from_json(&read_json(&subgraph)?)?;
            let (restriction, restricted) = tls::restrict_tls(&m, &spec)?;
            if json {
                output::print(&json!({
                    "command": "tls restrict",
                    "graph": cj::graph_to_json(&restriction.subgraph),
                    "module": cj::module_to_json(&restricted),
                }));
            } else {
                println!(
                    "restricted to {} vertices / {} edges, divisor {}",
                    restriction.subgraph.vertices().len(),
                    restriction.subgraph.edges().len(),
                    restricted.divisor().describe()
                );
            }
            Ok(0)
        }
    }
}

// -------------------------------------------------------------- matroid

#[derive(Args)]
pub struct MatroidArgs {
    #[command(subcommand)]
    sub: MatroidCmd,
}

#[derive(Subcommand)]
enum MatroidCmd {
    /// Circuit axioms and the rank formula.
    Check {
        #[arg(short = 'm', long)]
        matroid: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Rank-2 flats of a simple rank-3 matroid.
    Flats {
        #[arg(short = 'm', long)]
        matroid: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// The Levi incidence graph.
    Levi {
        #[arg(short = 'm', long)]
        matroid: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// The rank-2 series on the Levi graph.
    Series {
        #[arg(short = 'm', long)]
        matroid: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Membership in the tropical linear space of the trivially valuated
    /// matroid.
    Bergman {
        #[arg(short = 'm', long)]
        matroid: PathBuf,
        /// Coordinates, e.g. '["0","1/2","inf"]', one per element.
        #[arg(long)]
        point: String,
        #[arg(long)]
        json: bool,
    },
}

fn known_fixture_note(elements: usize, circuits3: usize) -> Option<&'static str> {
    // static realizability annotations for the shipped fixtures
    if elements == 7 && circuits3 == 7 {
        Some("Fano plane: realizable only in characteristic 2")
    } else {
        None
    }
}

pub fn matroid(a: MatroidArgs) -> Result<i32> {
    match a.sub {
        MatroidCmd::Check { matroid, json } => {
            let m = cj::matroid_from_json(&read_json(&matroid)?)?;
            let report = m.axioms_check();
            let note = known_fixture_note(
                m.elements.len(),
                m.circuits.iter().filter(|c| c.len() == 3).count(),
            );
            if json {
                output::print(&json!({
                    "command": "matroid check",
                    "ok": report.ok(),
                    "rank": m.rank(),
                    "failures": report.failures,
                    "note": note,
                }));
            } else {
                println!(
                    "{} (rank {})",
                    if report.ok() { "axioms pass" } else { "axioms fail" },
                    m.rank()
                );
                for f in &report.failures {
                    println!("  {f}");
                }
                if let Some(n) = note {
                    println!("  note: {n}");
                }
            }
            Ok(if report.ok() { 0 } else { 1 })
        }
        MatroidCmd::Flats { matroid, json } => {
            let m = cj::matroid_from_json(&read_json(&matroid)?)?;
            let flats = m.rank2_flats()?;
            let named: Vec<Vec<String>> = flats
                .iter()
                .map(|f| f.iter().map(|i| m.elements[*i].clone()).collect())
                .collect();
            if json {
                output::print(&json!({"command": "matroid flats", "flats": named}));
            } else {
                for f in named {
                    println!("{{{}}}", f.join(","));
                }
            }
            Ok(0)
        }
        MatroidCmd::Levi { matroid, json } => {
            let m = cj::matroid_from_json(&read_json(&matroid)?)?;
            let levi = tropls_core::matroid::levi_graph(&m)?;
            if json {
                output::print(&json!({
                    "command": "matroid levi",
                    "graph": cj::graph_to_json(&levi.graph),
                }));
            } else {
                println!(
                    "{} vertices, {} edges, genus {}",
                    levi.graph.vertices().len(),
                    levi.graph.edges().len(),
                    levi.graph.genus()
                );
            }
            Ok(0)
        }
        MatroidCmd::Series { matroid, json } => {
            let m = cj::matroid_from_json(&read_json(&matroid)?)?;
            let (levi, divisor, module) = tropls_core::matroid::cartwright_series(&m)?;
            if json {
                output::print(&json!({
                    "command": "matroid series",
                    "graph": cj::graph_to_json(&levi.graph),
                    "divisor": cj::divisor_to_json(&divisor),
                    "module": cj::module_to_json(&module),
                }));
            } else {
                println!(
                    "degree {} divisor, {} generators",
                    divisor.degree(),
                    module.generators().len()
                );
            }
            Ok(0)
        }
        MatroidCmd::Bergman { matroid, point, json } => {
            let m = cj::matroid_from_json(&read_json(&matroid)?)?;
            let coords_text: Vec<String> = serde_json::from_str(&point)
                .map_err(|e| Error::input(format!("point {point:?}: {e}")))?;
            let coords = coords_text
                .iter()
                .map(|s| {
                    if s == "inf" {
                        Ok(None)
                    } else {
                        parse_rational(s).map(Some)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let x = TropicalPoint { coords };
            let v = ValuatedMatroid::trivial(&m);
            let inside = bergman_membership(&x, &v)?;
            if json {
                output::print(&json!({"command": "matroid bergman", "member": inside}));
            } else {
                println!("{}", if inside { "inside" } else { "outside" });
            }
            Ok(if inside { 0 } else { 1 })
        }
    }
}

// --------------------------------------------------------------- morph

#[derive(Args)]
pub struct MorphArgs {
    #[command(subcommand)]
    sub: MorphCmd,
}

#[derive(Subcommand)]
enum MorphCmd {
    /// Add the infinite rays of the modification.
    Modify {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'm', long)]
        module: PathBuf,
        #[arg(long)]
        json: bool,
        /// Emit the modified graph in DOT format.
        #[arg(long)]
        dot: bool,
    },
    /// Coordinate map images at the vertices and ray bases.
    Map {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'm', long)]
        module: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Harmonicity of the coordinate map against the tree target.
    Balance {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 'm', long)]
        module: PathBuf,
        #[arg(long)]
        json: bool,
        /// Emit the target tree in DOT format.
        #[arg(long)]
        dot: bool,
    },
}

pub fn morph(a: MorphArgs) -> Result<i32> {
    match a.sub {
        MorphCmd::Modify {
            graph,
            module,
            json,
            dot: want_dot,
        } => {
            let g = load_graph(&graph)?;
            let m = load_module(&g, &module)?;
            let modified = morphism::tropical_modification(&m)?;
            if want_dot {
                println!("{}", dot::modified_graph(&modified));
                return Ok(0);
            }
            if json {
                let rays: Vec<_> = modified
                    .rays
                    .iter()
                    .map(|r| {
                        json!({
                            "id": r.id,
                            "base": cj::point_to_json(&g, &r.base),
                            "slopes": r.slopes,
                        })
                    })
                    .collect();
                output::print(&json!({"command": "morph modify", "rays": rays}));
            } else {
                for r in &modified.rays {
                    println!(
                        "{} at {} with slopes {:?}",
                        r.id,
                        g.describe_point(&r.base),
                        r.slopes
                    );
                }
            }
            Ok(0)
        }
        MorphCmd::Map { graph, module, json } => {
            let g = load_graph(&graph)?;
            let m = load_module(&g, &module)?;
            let modified = morphism::tropical_modification(&m)?;
            let map = morphism::coordinate_map(modified);
            let mut rows = Vec::new();
            for v in 0..g.vertices().len() {
                let y = map.image(&morphism::MPoint::Base(Point::Vertex(v)));
                rows.push((g.vertices()[v].name.clone(), y));
            }
            if json {
                let rows: Vec<_> = rows
                    .iter()
                    .map(|(name, y)| {
                        json!({
                            "point": name,
                            "image": y.coords.iter().map(|c| match c {
                                Some(c) => format_rational(c),
                                None => "inf".to_string(),
                            }).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                output::print(&json!({"command": "morph map", "images": rows}));
            } else {
                for (name, y) in rows {
                    let cs: Vec<String> = y
                        .coords
                        .iter()
                        .map(|c| match c {
                            Some(c) => format_rational(c),
                            None => "inf".to_string(),
                        })
                        .collect();
                    println!("{name} -> [{}]", cs.join(" : "));
                }
            }
            Ok(0)
        }
        MorphCmd::Balance {
            graph,
            module,
            json,
            dot: want_dot,
        } => {
            let g = load_graph(&graph)?;
            let m = load_module(&g, &module)?;
            if want_dot {
                let v = tls::rank1_valuated_circuits(&m)?;
                let tree = morphism::rank1_tree_target(&v)?;
                println!("{}", dot::target_tree(&tree));
                return Ok(0);
            }
            let modified = morphism::tropical_modification(&m)?;
            let map = morphism::coordinate_map(modified);
            let report = morphism::balancing_check(&map)?;
            if json {
                output::print(&json!({
                    "command": "morph balance",
                    "balanced": report.ok(),
                    "failures": report.failures,
                    "local_degrees": report.local_degrees.iter()
                        .map(|(p, d)| json!({"point": p, "degree": d})).collect::<Vec<_>>(),
                    "segment_degrees": report.segment_degrees.iter()
                        .map(|(s, d)| json!({"segment": s, "degree": d})).collect::<Vec<_>>(),
                }));
            } else {
                println!("{}", if report.ok() { "balanced" } else { "not balanced" });
                for (s, d) in &report.segment_degrees {
                    println!("  segment {s}: degree {d}");
                }
                for f in &report.failures {
                    println!("  {f}");
                }
            }
            Ok(if report.ok() { 0 } else { 1 })
        }
    }
}

// -------------------------------------------------------------- example

#[derive(Args)]
pub struct ExampleArgs {
    /// Fixture name, or "list".
    name: String,
    /// Run the fixture's expected-facts table.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    json: bool,
    /// Emit the fixture graph in DOT format.
    #[arg(long)]
    dot: bool,
    /// Lollipop divisor multiplicity.
    #[arg(long, default_value_t = 2)]
    m: i64,
    /// Loop-of-loops side lengths.
    #[arg(long, default_value = "5")]
    l1: String,
    #[arg(long, default_value = "4")]
    l2: String,
    #[arg(long, default_value = "3")]
    l3: String,
    /// Loop-of-loops divisor position along the l2 side.
    #[arg(long, default_value = "3")]
    x: String,
    /// Interval divisor points.
    #[arg(long, default_value = "3/4")]
    w0: String,
    #[arg(long, default_value = "1/4")]
    w1: String,
}

fn build_fixture(a: &ExampleArgs) -> Result<fixtures::Fixture> {
    match a.name.as_str() {
        "lollipop" => Ok(fixtures::lollipop(a.m)),
        "barbell" => Ok(fixtures::barbell()),
        "interval" => Ok(fixtures::interval_with(
            parse_rational(&a.w0)?,
            parse_rational(&a.w1)?,
        )),
        "fg" => Ok(fixtures::fg()),
        "luo" => Ok(fixtures::luo()),
        "loop-of-loops" => Ok(fixtures::loop_of_loops(
            parse_rational(&a.l1)?,
            parse_rational(&a.l2)?,
            parse_rational(&a.l3)?,
            parse_rational(&a.x)?,
        )),
        "fano" => Ok(fixtures::fano()),
        "u34" => Ok(fixtures::u34()),
        other => Err(Error::input(format!(
            "unknown fixture {other:?}; available: {}",
            fixtures::names().join(", ")
        ))),
    }
}

pub fn example(a: ExampleArgs) -> Result<i32> {
    if a.name == "list" {
        if a.json {
            output::print(&json!({"command": "example list", "names": fixtures::names()}));
        } else {
            for n in fixtures::names() {
                println!("{n}");
            }
        }
        return Ok(0);
    }
    let f = build_fixture(&a)?;
    if a.dot {
        println!("{}", dot::metric_graph(&f.graph));
        return Ok(0);
    }
    if a.check {
        let facts = fixtures::expected_facts(&f, seed())?;
        let all = facts.iter().all(|x| x.passed);
        if a.json {
            let rows: Vec<_> = facts
                .iter()
                .map(|x| json!({"fact": x.label, "passed": x.passed, "detail": x.detail}))
                .collect();
            output::print(&json!({
                "command": "example check",
                "name": f.name,
                "passed": all,
                "facts": rows,
            }));
        } else {
            for x in &facts {
                let mark = if x.passed { "ok " } else { "FAIL" };
                if x.detail.is_empty() {
                    println!("[{mark}] {}", x.label);
                } else {
                    println!("[{mark}] {} ({})", x.label, x.detail);
                }
            }
        }
        return Ok(if all { 0 } else { 1 });
    }
    if a.json {
        output::print(&json!({
            "command": "example",
            "name": f.name,
            "graph": cj::graph_to_json(&f.graph),
            "divisor": cj::divisor_to_json(&f.divisor),
            "module": f.module.as_ref().map(cj::module_to_json),
        }));
    } else {
        println!(
            "{}: {} vertices, {} edges, genus {}, divisor {}",
            f.name,
            f.graph.vertices().len(),
            f.graph.edges().len(),
            f.graph.genus(),
            f.divisor.describe()
        );
    }
    Ok(0)
}
