//! Command-line front end for unit-distance graph experiments.
//!
//! Exit codes: 0 success or feasible, 1 usage or input error, 2 proven
//! infeasible (basis {1}), 3 search failure (not a proof), 4 limit exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use unitdist::construct::{
    candidate_from_bracket, execute, plan_by_name, sweep, sweep_grid, ConstructionPlan,
    ExecuteError, SweepResult,
};
use unitdist::docs::{
    plan_text, sha256_hex, sweep_table, BasisDoc, EmbeddingDoc, PlanDoc, RunManifest, SweepDoc, TOOL_VERSION,
};
use unitdist::embed::{self, Embedding, SolveOptions, VerifyTolerances};
use unitdist::graph::{graph_from_lcf, isomorphic, parse_lcf, Graph};
use unitdist::groebner::{
    buchberger, check_distinct, extract_solutions, Extraction, GroebnerResult, Limits, Status,
};
use unitdist::poly::Rational;
use unitdist::svg::{render_svg, SvgStyle};
use unitdist::{auto_pin, catalog, distance_constraints, saturate_distinctness, ConstraintSystem, MonomialOrder, Pin};

const FEASIBLE_CAVEAT: &str = "note: a feasible basis only says the system has complex solutions; \
it does not certify a real embedding with distinct vertices";

struct Failure {
    code: u8,
    msg: String,
}

fn input_err(msg: impl std::fmt::Display) -> Failure {
    Failure { code: 1, msg: msg.to_string() }
}

type Res<T> = Result<T, Failure>;

#[derive(Parser)]
#[command(name = "unitdist", version, about = "Unit-distance graph embeddings: exact feasibility, numerical search, constructions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Debug, Default)]
struct GraphInput {
    /// Catalog graph name (k4, k4_minus_e, k2_3, moser_spindle, petersen, heawood, ...).
    #[arg(long)]
    graph: Option<String>,
    /// LCF string such as "(5,-5)^7".
    #[arg(long)]
    lcf: Option<String>,
    /// Difference set residues, comma separated, e.g. "1,2,4".
    #[arg(long, value_name = "R1,R2,...", allow_hyphen_values = true)]
    diffset: Option<String>,
    /// Modulus for --diffset.
    #[arg(long, default_value_t = 7)]
    modulus: i64,
    /// Edge-list file: one "u v" pair per line, '#' comments.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Remove a vertex after building (repeatable).
    #[arg(long = "delete-vertex", value_name = "LABEL")]
    delete_vertex: Vec<String>,
    /// Remove an edge after building (repeatable).
    #[arg(long = "delete-edge", value_name = "U,V")]
    delete_edge: Vec<String>,
}

#[derive(Args, Clone, Debug)]
struct PinInput {
    /// "auto" pins the first edge to (0,0)-(1,0); otherwise LABEL=X,Y with
    /// rational coordinates (repeatable).
    #[arg(long = "pin", default_value = "auto")]
    pins: Vec<String>,
    /// Force two vertices apart with an auxiliary variable (repeatable).
    #[arg(long, value_name = "U,V")]
    saturate: Vec<String>,
}

#[derive(Args, Clone, Debug)]
struct CoordInput {
    /// Embedding document written by another subcommand.
    #[arg(long)]
    embedding: Option<PathBuf>,
    /// Plain coordinate file, "label x y" per line; needs a graph input.
    #[arg(long)]
    coords: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphInput,
}

#[derive(Args, Clone, Debug)]
struct PlanInput {
    /// Plan name: heawood or four_bar.
    #[arg(long, default_value = "heawood")]
    plan: String,
    /// Branch variant 0..15 for the heawood plan (0 is the default choice).
    #[arg(long, default_value_t = 0)]
    variant: usize,
    /// Parameter value NAME=VALUE (repeatable); others use plan defaults.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

#[derive(Args, Clone, Debug)]
struct SweepInput {
    #[command(flatten)]
    plan: PlanInput,
    /// Parameter to sweep.
    #[arg(long, default_value = "alpha")]
    axis: String,
    /// Sweep range "lo,hi"; defaults to the parameter's full range.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Optional second axis, giving a grid of nested 1-D sweeps.
    #[arg(long)]
    axis2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    range2: Option<String>,
    #[arg(long, default_value_t = 100)]
    samples2: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Lex,
    Grevlex,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a graph and print its properties.
    Graph {
        #[command(flatten)]
        input: GraphInput,
        /// Compare against another graph: catalog name, "lcf:TEXT", or
        /// "diffset:R1,R2,...:M".
        #[arg(long)]
        compare: Option<String>,
        /// Write the edge list here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the distance constraint system.
    Constraints {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pins: PinInput,
    },
    /// Gröbner basis feasibility check (exit 2 when the basis is {1}).
    Groebner {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        pins: PinInput,
        #[arg(long, value_enum, default_value = "lex")]
        order: OrderArg,
        #[arg(long, default_value_t = Limits::default().max_pairs)]
        max_pairs: u64,
        #[arg(long, default_value_t = Limits::default().max_degree)]
        max_degree: u32,
        #[arg(long, default_value_t = Limits::default().max_work)]
        max_work: u64,
        /// Back-substitute real solutions (lex order only) and check for
        /// coincident vertices.
        #[arg(long)]
        extract: bool,
        #[arg(long, default_value_t = 1e-9)]
        distinct_tol: f64,
        /// Write the basis document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random-restart numerical embedding search (exit 3 if none found).
    Solve {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        residual_tol: f64,
        #[arg(long, default_value_t = 1e-3)]
        separation_floor: f64,
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
        /// Half-width of the random start box (default n/2).
        #[arg(long)]
        init_box: Option<f64>,
        /// Also print a rigidity report.
        #[arg(long)]
        rigidity: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure edge deviation and separation (exit 3 if the check fails).
    Verify {
        #[command(flatten)]
        coords: CoordInput,
        #[arg(long, default_value_t = 1e-9)]
        max_edge_deviation: f64,
        #[arg(long, default_value_t = 1e-6)]
        min_separation: f64,
    },
    /// Polish approximate coordinates (exit 3 if the result does not verify).
    Refine {
        #[command(flatten)]
        coords: CoordInput,
        /// Rescale by the best-fit factor before polishing.
        #[arg(long)]
        similarity: bool,
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rigidity matrix rank and flex count.
    Rigidity {
        #[command(flatten)]
        coords: CoordInput,
    },
    /// Show and execute a construction plan.
    Plan {
        #[command(flatten)]
        plan: PlanInput,
        /// Write the plan document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep plan parameters and list sign changes of d(target) - 1.
    Sweep {
        #[command(flatten)]
        sweep: SweepInput,
        /// Write the tab-separated scan table here instead of stdout.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep, bisect each bracket, polish and verify the candidate
    /// (exit 3 if no verified candidate).
    Bisect {
        #[command(flatten)]
        sweep: SweepInput,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Only bisect this bracket (index into the sweep's list).
        #[arg(long)]
        bracket: Option<usize>,
        /// Write the tab-separated scan table here.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Write the best candidate document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw an embedding or plan execution as SVG.
    Render {
        #[command(flatten)]
        coords: CoordInput,
        /// Render a plan execution instead of stored coordinates.
        #[arg(long)]
        plan: Option<String>,
        #[arg(long, default_value_t = 0)]
        variant: usize,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Output file; "-" writes to stdout.
        #[arg(long, default_value = "-")]
        svg: String,
        /// Edges off unit length by more than this are dashed.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

/// Collects written files and input hashes for the run manifest.
struct Run {
    command: String,
    inputs: BTreeMap<String, String>,
    options: serde_json::Value,
    outputs: Vec<PathBuf>,
}

impl Run {
    fn write(&mut self, path: &Path, text: &str) -> Res<()> {
        fs::write(path, text).map_err(|e| input_err(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    fn finish(&self, outcome: &str, code: u8) -> Res<()> {
        let Some(first) = self.outputs.first() else {
            return Ok(());
        };
        let manifest = RunManifest {
            command: self.command.clone(),
            argv: std::env::args().collect(),
            input_hashes: self.inputs.clone(),
            options: self.options.clone(),
            tool_version: TOOL_VERSION.to_string(),
            outcome: outcome.to_string(),
            exit_code: code as i32,
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
        };
        let mut name = first.clone().into_os_string();
        name.push(".manifest.json");
        fs::write(&name, manifest.to_json()).map_err(|e| input_err(format!("cannot write manifest: {e}")))
    }
}

fn read(path: &Path, run: &mut Run) -> Res<String> {
    let text = fs::read_to_string(path).map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
    run.inputs.insert(path.display().to_string(), sha256_hex(text.as_bytes()));
    Ok(text)
}

fn parse_residues(text: &str) -> Res<Vec<i64>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<i64>().map_err(|_| input_err(format!("bad residue `{s}`"))))
        .collect()
}

fn graph_from_spec(spec: &str) -> Res<(String, Graph)> {
    if let Some(t) = spec.strip_prefix("lcf:") {
        let g = graph_from_lcf(&parse_lcf(t).map_err(input_err)?);
        return Ok((spec.to_string(), g));
    }
    if let Some(t) = spec.strip_prefix("diffset:") {
        let (r, m) = t.rsplit_once(':').ok_or_else(|| input_err("expected diffset:R1,R2,...:M"))?;
        let m: i64 = m.parse().map_err(|_| input_err("bad modulus"))?;
        let g = Graph::from_difference_set(&parse_residues(r)?, m).map_err(input_err)?;
        return Ok((spec.to_string(), g));
    }
    Ok((spec.to_string(), catalog(spec).map_err(input_err)?))
}

fn build_graph(input: &GraphInput, run: &mut Run) -> Res<(String, Graph)> {
    let given = [input.graph.is_some(), input.lcf.is_some(), input.diffset.is_some(), input.edges.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(input_err("give exactly one of --graph, --lcf, --diffset, --edges"));
    }
    let (mut name, mut g) = if let Some(n) = &input.graph {
        (n.clone(), catalog(n).map_err(input_err)?)
    } else if let Some(t) = &input.lcf {
        (format!("lcf:{t}"), graph_from_lcf(&parse_lcf(t).map_err(input_err)?))
    } else if let Some(r) = &input.diffset {
        let g = Graph::from_difference_set(&parse_residues(r)?, input.modulus).map_err(input_err)?;
        (format!("diffset:{r}:{}", input.modulus), g)
    } else {
        let path = input.edges.as_ref().unwrap();
        let text = read(path, run)?;
        (path.display().to_string(), Graph::parse_edge_list(&text).map_err(input_err)?)
    };
    for v in &input.delete_vertex {
        g = g.delete_vertex(v).map_err(input_err)?;
        name += &format!("-{v}");
    }
    for e in &input.delete_edge {
        let (u, v) = split_pair(e)?;
        g = g.delete_edge(u, v).map_err(input_err)?;
        name += &format!("-{u}{v}");
    }
    run.inputs.insert("graph".into(), g.hash());
    Ok((name, g))
}

fn split_pair(text: &str) -> Res<(&str, &str)> {
    text.split_once(',')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| input_err(format!("expected U,V, got `{text}`")))
}

fn parse_range(text: &str) -> Res<(f64, f64)> {
    let (a, b) = split_pair(text)?;
    let p = |s: &str| s.parse::<f64>().map_err(|_| input_err(format!("bad number `{s}`")));
    Ok((p(a)?, p(b)?))
}

fn build_system(g: &Graph, pins: &PinInput) -> Res<ConstraintSystem> {
    let pin_list = if pins.pins.len() == 1 && pins.pins[0] == "auto" {
        auto_pin(g).map_err(input_err)?
    } else {
        let mut out = Vec::new();
        for p in &pins.pins {
            let (label, xy) = p.split_once('=').ok_or_else(|| input_err(format!("expected LABEL=X,Y, got `{p}`")))?;
            let (x, y) = split_pair(xy)?;
            let r = |s: &str| Rational::from_str(s).map_err(|_| input_err(format!("bad rational `{s}`")));
            out.push(Pin::new(label, r(x)?, r(y)?));
        }
        out
    };
    let sys = distance_constraints(g, &pin_list).map_err(input_err)?;
    let pairs: Vec<(&str, &str)> = pins.saturate.iter().map(|s| split_pair(s)).collect::<Res<_>>()?;
    saturate_distinctness(&sys, &pairs).map_err(input_err)
}

fn load_coords(input: &CoordInput, run: &mut Run) -> Res<(String, Graph, Vec<[f64; 2]>)> {
    match (&input.embedding, &input.coords) {
        (Some(path), None) => {
            let doc = EmbeddingDoc::from_json(&read(path, run)?).map_err(input_err)?;
            let g = doc.graph().map_err(input_err)?;
            Ok((doc.graph_name.clone(), g, doc.coords()))
        }
        (None, Some(path)) => {
            let (name, g) = build_graph(&input.graph, run)?;
            let text = read(path, run)?;
            let mut c = vec![None; g.n()];
            for (i, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap().trim();
                if line.is_empty() {
                    continue;
                }
                let f: Vec<&str> = line.split_whitespace().collect();
                let bad = || input_err(format!("{}:{}: expected `label x y`", path.display(), i + 1));
                if f.len() != 3 {
                    return Err(bad());
                }
                let v = g.index_of(f[0]).ok_or_else(|| input_err(format!("unknown vertex `{}`", f[0])))?;
                c[v] = Some([f[1].parse().map_err(|_| bad())?, f[2].parse().map_err(|_| bad())?]);
            }
            let coords = c
                .into_iter()
                .enumerate()
                .map(|(v, p)| p.ok_or_else(|| input_err(format!("missing coordinates for `{}`", g.label(v)))))
                .collect::<Res<Vec<_>>>()?;
            Ok((name, g, coords))
        }
        _ => Err(input_err("give exactly one of --embedding or --coords")),
    }
}

fn load_plan(p: &PlanInput) -> Res<(ConstructionPlan, Vec<f64>)> {
    let plan = plan_by_name(&p.plan, p.variant)
        .ok_or_else(|| input_err(format!("unknown plan `{}` or variant {}", p.plan, p.variant)))?;
    let params = plan_params(&plan, &p.params)?;
    Ok((plan, params))
}

fn plan_params(plan: &ConstructionPlan, given: &[String]) -> Res<Vec<f64>> {
    let mut values = plan.defaults();
    for kv in given {
        let (k, v) = kv.split_once('=').ok_or_else(|| input_err(format!("expected NAME=VALUE, got `{kv}`")))?;
        let i = plan.param_index(k.trim()).ok_or_else(|| input_err(format!("unknown parameter `{k}`")))?;
        values[i] = v.trim().parse().map_err(|_| input_err(format!("bad value `{v}`")))?;
    }
    Ok(values)
}

fn print_coords(g: &Graph, coords: &[[f64; 2]]) {
    for (l, c) in g.labels().iter().zip(coords) {
        println!("  {l:>4}  {:>22.17}  {:>22.17}", c[0], c[1]);
    }
}

fn print_metrics(e: &Embedding) {
    println!("max edge deviation {:e}", e.max_edge_deviation());
    println!("min separation     {:e}", e.min_separation());
    println!("residual           {:e}", e.residual());
}

fn cmd_graph(input: &GraphInput, compare: &Option<String>, out: &Option<PathBuf>, run: &mut Run) -> Res<u8> {
    let (name, g) = build_graph(input, run)?;
    println!("graph {name}");
    println!("vertices {}  edges {}", g.n(), g.edge_count());
    println!("degrees {:?}", g.degree_sequence());
    let girth = g.girth().map_or("infinite".to_string(), |x| x.to_string());
    println!("connected {}  bipartite {}  girth {girth}", g.is_connected(), g.is_bipartite());
    println!("hash {}", g.hash());
    if let Some(spec) = compare {
        let (other_name, h) = graph_from_spec(spec)?;
        println!("isomorphic to {other_name}: {}", isomorphic(&g, &h));
    }
    if let Some(path) = out {
        run.write(path, &g.to_edge_list())?;
    }
    run.finish("ok", 0)?;
    Ok(0)
}

fn cmd_constraints(input: &GraphInput, pins: &PinInput, run: &mut Run) -> Res<u8> {
    let (name, g) = build_graph(input, run)?;
    let sys = build_system(&g, pins)?;
    let order = sys.default_order();
    println!("graph {name}: {} polynomials in {} variables", sys.polys.len(), sys.vars.len());
    println!("variables {}", sys.vars.iter().map(|v| v.name.as_str()).collect::<Vec<_>>().join(" > "));
    for r in sys.pin_relations() {
        println!("pin {r} = 0");
    }
    for p in &sys.polys {
        println!("{} = 0", p.display(&sys.vars, &order));
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_groebner(
    input: &GraphInput,
    pins: &PinInput,
    order_arg: OrderArg,
    limits: Limits,
    extract: bool,
    distinct_tol: f64,
    out: &Option<PathBuf>,
    run: &mut Run,
) -> Res<u8> {
    let (name, g) = build_graph(input, run)?;
    let sys = build_system(&g, pins)?;
    let order = match order_arg {
        OrderArg::Lex => sys.default_order(),
        OrderArg::Grevlex => MonomialOrder::grevlex(sys.vars.len()),
    };
    let r: GroebnerResult = buchberger(&sys, &order, &limits);
    println!("graph {name}");
    println!("order {:?}: {}", order.kind, order.precedence().iter().map(|&v| sys.vars.name(v)).collect::<Vec<_>>().join(" > "));
    for rel in sys.pin_relations() {
        println!("pinned: {rel}");
    }
    let s = &r.stats;
    let stats = format!(
        "pairs {} pruned {} zero-reductions {} max-degree {} work {}",
        s.pairs_processed, s.pairs_pruned, s.zero_reductions, s.max_degree, s.work
    );
    let (code, outcome) = match r.status {
        Status::Infeasible => {
            println!("basis = {{1}}: INFEASIBLE, no embedding exists (not even over the complex numbers)");
            (2, "infeasible")
        }
        Status::LimitExceeded => {
            eprintln!("limit exceeded before completion ({stats}); no verdict");
            (4, "limit_exceeded")
        }
        Status::Feasible => {
            println!("basis ({} elements):", r.basis.len());
            for p in &r.basis {
                println!("  {}", p.display(&sys.vars, &order));
            }
            println!("FEASIBLE");
            println!("{FEASIBLE_CAVEAT}");
            (0, "feasible")
        }
    };
    println!("{stats}");
    if extract && r.status == Status::Feasible {
        if order.kind != unitdist::poly::OrderKind::Lex {
            return Err(input_err("--extract needs --order lex"));
        }
        match extract_solutions(&r) {
            Extraction::NonTriangular => println!("extraction: basis is not triangular; no points listed"),
            Extraction::Solutions { solutions, dead_branches } => {
                let coords: Vec<Vec<[f64; 2]>> = solutions.iter().map(|s| s.coordinates(&sys)).collect();
                let reports = check_distinct(&coords, &g, distinct_tol);
                println!("{} real solutions ({dead_branches} abandoned branches)", solutions.len());
                for (i, rep) in reports.iter().enumerate() {
                    let pts: Vec<String> = g
                        .labels()
                        .iter()
                        .zip(&rep.coords)
                        .map(|(l, c)| format!("{l}=({:.12}, {:.12})", c[0], c[1]))
                        .collect();
                    println!("  #{i}: {}", pts.join(" "));
                    if rep.pass {
                        println!("      distinct: pass");
                    }
                    for (u, v, d) in &rep.duplicates {
                        println!("      duplicate: {u} and {v} coincide (distance {d:e})");
                    }
                }
            }
        }
    }
    if let Some(path) = out {
        let doc = BasisDoc::new(&name, &sys, &r);
        run.write(path, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
    }
    run.finish(outcome, code)?;
    Ok(code)
}

fn cmd_solve(input: &GraphInput, opts: SolveOptions, rigidity: bool, out: &Option<PathBuf>, run: &mut Run) -> Res<u8> {
    let (name, g) = build_graph(input, run)?;
    match embed::solve(&g, &opts) {
        Ok(e) => {
            println!("embedding found for {name}");
            print_coords(&g, e.coords());
            print_metrics(&e);
            if rigidity {
                match embed::rigidity_report(&g, &e) {
                    Ok(r) => println!("rigidity rank {} flex {} rigid {}", r.jacobian_rank, r.flex_count, r.rigid),
                    Err(err) => println!("rigidity: {err}"),
                }
            }
            if let Some(path) = out {
                let mut doc = EmbeddingDoc::new("embedding", &name, &e);
                doc.seed = Some(opts.seed);
                doc.solver = Some(opts.clone());
                run.write(path, &doc.to_json())?;
            }
            run.finish("embedding_found", 0)?;
            Ok(0)
        }
        Err(f) => {
            println!(
                "no embedding found after {} restarts: best residual {:e}, best separation {:e}",
                f.restarts_used, f.best_residual, f.best_separation
            );
            println!("this is a search failure, not a proof that no embedding exists");
            if let (Some(path), Some(best)) = (out, &f.best) {
                let mut doc = EmbeddingDoc::new("failed_search_best", &name, best);
                doc.seed = Some(opts.seed);
                doc.solver = Some(opts.clone());
                run.write(path, &doc.to_json())?;
            }
            run.finish("search_failed", 3)?;
            Ok(3)
        }
    }
}

fn cmd_verify(input: &CoordInput, tol: VerifyTolerances, run: &mut Run) -> Res<u8> {
    let (name, g, coords) = load_coords(input, run)?;
    let v = embed::verify(&g, &coords, &tol).map_err(input_err)?;
    println!("graph {name}");
    println!("max edge deviation {:e} (limit {:e})", v.max_edge_deviation, tol.max_edge_deviation);
    println!("min separation     {:e} (limit {:e})", v.min_separation, tol.min_separation);
    println!("{}", if v.pass { "PASS" } else { "FAIL" });
    Ok(if v.pass { 0 } else { 3 })
}

fn cmd_refine(input: &CoordInput, similarity: bool, iters: usize, out: &Option<PathBuf>, run: &mut Run) -> Res<u8> {
    let (name, g, coords) = load_coords(input, run)?;
    if similarity {
        println!("best-fit scale {}", embed::best_fit_scale(&g, &coords));
    }
    let e = match embed::refine(&g, &coords, similarity, iters) {
        Ok(e) => e,
        Err(f) => {
            println!("refinement made no progress (residual {:e})", f.residual);
            f.best
        }
    };
    print_coords(&g, e.coords());
    print_metrics(&e);
    let v = embed::verify(&g, e.coords(), &VerifyTolerances::default()).map_err(input_err)?;
    println!("{}", if v.pass { "PASS" } else { "FAIL" });
    if let Some(path) = out {
        let doc = EmbeddingDoc { verification: Some(v), ..EmbeddingDoc::new("embedding", &name, &e) };
        run.write(path, &doc.to_json())?;
    }
    let code = if v.pass { 0 } else { 3 };
    run.finish(if v.pass { "verified" } else { "not_verified" }, code)?;
    Ok(code)
}

fn cmd_rigidity(input: &CoordInput, run: &mut Run) -> Res<u8> {
    let (_, g, coords) = load_coords(input, run)?;
    let e = Embedding::new(&g, coords).map_err(input_err)?;
    let r = embed::rigidity_report(&g, &e).map_err(input_err)?;
    println!("rank {} (tolerance {:e} relative to the first pivot)", r.jacobian_rank, r.rank_tolerance);
    println!("flex count {}", r.flex_count);
    println!("{}", if r.rigid { "rigid" } else { "flexible" });
    Ok(0)
}

fn cmd_plan(p: &PlanInput, out: &Option<PathBuf>, run: &mut Run) -> Res<u8> {
    let (plan, params) = load_plan(p)?;
    print!("{}", plan_text(&plan));
    match execute(&plan, &params) {
        Ok(ex) => {
            println!("executed at {:?}", params);
            print_coords(&plan.graph, &ex.coords);
            let e = Embedding::new(&plan.graph, ex.coords.clone()).map_err(input_err)?;
            let (tu, tv) = plan.target_indices();
            let worst = plan
                .realized_edges()
                .iter()
                .map(|&(u, v)| {
                    let d = (ex.coords[u][0] - ex.coords[v][0]).hypot(ex.coords[u][1] - ex.coords[v][1]);
                    (d - 1.0).abs()
                })
                .fold(0.0, f64::max);
            println!("{} realized unit edges, worst deviation {worst:e}", plan.realized_edges().len());
            println!("d({}, {}) = {:.17}", plan.graph.label(tu), plan.graph.label(tv), ex.target_distance);
            println!("min separation {:e}", e.min_separation());
            if let Some(path) = out {
                run.write(path, &(serde_json::to_string_pretty(&PlanDoc::new(&plan)).unwrap() + "\n"))?;
            }
            run.finish("executed", 0)?;
            Ok(0)
        }
        Err(ExecuteError::Step(f)) => {
            println!("step failure: {f}");
            if let Some(path) = out {
                run.write(path, &(serde_json::to_string_pretty(&PlanDoc::new(&plan)).unwrap() + "\n"))?;
            }
            run.finish("step_failure", 3)?;
            Ok(3)
        }
        Err(e) => Err(input_err(e)),
    }
}

fn run_sweep(s: &SweepInput) -> Res<(ConstructionPlan, Vec<String>, SweepResult)> {
    let (plan, fixed) = load_plan(&s.plan)?;
    let full = |axis: &str| {
        plan.param_index(axis)
            .map(|i| (plan.parameters[i].lo, plan.parameters[i].hi))
            .ok_or_else(|| input_err(format!("unknown axis `{axis}`")))
    };
    let r1 = match &s.range {
        Some(t) => parse_range(t)?,
        None => full(&s.axis)?,
    };
    let result = match &s.axis2 {
        None => sweep(&plan, &s.axis, r1, s.samples, &fixed).map_err(input_err)?,
        Some(a2) => {
            let r2 = match &s.range2 {
                Some(t) => parse_range(t)?,
                None => full(a2)?,
            };
            sweep_grid(&plan, [(&s.axis, r1, s.samples), (a2, r2, s.samples2)], &fixed).map_err(input_err)?
        }
    };
    let mut axes = vec![s.axis.clone()];
    axes.extend(s.axis2.clone());
    Ok((plan, axes, result))
}

fn sweep_options(s: &SweepInput) -> serde_json::Value {
    json!({
        "plan": s.plan.plan, "variant": s.plan.variant, "params": s.plan.params,
        "axis": s.axis, "range": s.range, "samples": s.samples,
        "axis2": s.axis2, "range2": s.range2, "samples2": s.samples2,
    })
}

fn print_brackets(plan: &ConstructionPlan, r: &SweepResult) {
    if r.brackets.is_empty() {
        println!("NO_BRACKET: d - 1 does not change sign between executable samples");
        return;
    }
    println!("{} brackets:", r.brackets.len());
    for (i, b) in r.brackets.iter().enumerate() {
        let name = &plan.parameters[b.axis].name;
        println!(
            "  #{i}: {name} in [{}, {}] at {:?}, d-1 from {:e} to {:e}",
            b.lo[b.axis], b.hi[b.axis], b.lo, b.lo_value, b.hi_value
        );
    }
}

fn cmd_sweep(s: &SweepInput, table: &Option<PathBuf>, out: &Option<PathBuf>, run: &mut Run) -> Res<u8> {
    let (plan, axes, r) = run_sweep(s)?;
    let names: Vec<String> = plan.parameters.iter().map(|p| p.name.clone()).collect();
    let text = sweep_table(&names, &r);
    match table {
        Some(path) => run.write(path, &text)?,
        None => print!("{text}"),
    }
    let failed = r.samples.iter().filter(|x| x.failure.is_some()).count();
    println!("{} samples, {failed} step failures", r.samples.len());
    print_brackets(&plan, &r);
    if let Some(path) = out {
        let doc = SweepDoc { plan: plan.name.clone(), variant: s.plan.variant, axes, parameter_names: names, result: r.clone() };
        run.write(path, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
    }
    run.finish(if r.brackets.is_empty() { "no_bracket" } else { "brackets_found" }, 0)?;
    Ok(0)
}

fn cmd_bisect(
    s: &SweepInput,
    tol: f64,
    only: Option<usize>,
    table: &Option<PathBuf>,
    out: &Option<PathBuf>,
    run: &mut Run,
) -> Res<u8> {
    let (plan, _, r) = run_sweep(s)?;
    if let Some(path) = table {
        let names: Vec<String> = plan.parameters.iter().map(|p| p.name.clone()).collect();
        run.write(path, &sweep_table(&names, &r))?;
    }
    print_brackets(&plan, &r);
    let chosen: Vec<usize> = match only {
        Some(i) if i < r.brackets.len() => vec![i],
        Some(i) => return Err(input_err(format!("no bracket #{i}"))),
        None => (0..r.brackets.len()).collect(),
    };
    let mut best: Option<(f64, EmbeddingDoc)> = None;
    for i in chosen {
        let b = &r.brackets[i];
        match candidate_from_bracket(&plan, b, tol) {
            Ok(c) => {
                let v = c.verification;
                println!(
                    "#{i}: {:?} after {} steps, d = {:.15}; polished: max deviation {:e}, min separation {:e}: {}",
                    c.bisection.params,
                    c.bisection.iterations,
                    c.bisection.execution.target_distance,
                    v.max_edge_deviation,
                    v.min_separation,
                    if v.pass { "CANDIDATE PASSES VERIFY" } else { "does not verify" }
                );
                let mut doc = EmbeddingDoc::new("candidate", &plan.name, &c.embedding);
                doc.verification = Some(v);
                for (p, val) in plan.parameters.iter().zip(&c.bisection.params) {
                    doc.parameters.insert(p.name.clone(), *val);
                }
                let score = if v.pass { v.min_separation } else { -v.max_edge_deviation };
                let better = match &best {
                    None => true,
                    Some((s0, d0)) => {
                        let p0 = d0.verification.is_some_and(|x| x.pass);
                        (v.pass && !p0) || (v.pass == p0 && score > *s0)
                    }
                };
                if better {
                    best = Some((score, doc));
                }
            }
            Err(e) => println!("#{i}: {e}"),
        }
    }
    let verified = best.as_ref().is_some_and(|(_, d)| d.verification.is_some_and(|v| v.pass));
    if let (Some(path), Some((_, doc))) = (out, &best) {
        run.write(path, &doc.to_json())?;
    }
    if verified {
        println!("a verified candidate is numerical evidence, not a proof");
    } else {
        println!("no verified candidate");
    }
    let code = if verified { 0 } else { 3 };
    run.finish(if verified { "candidate_verified" } else { "no_candidate" }, code)?;
    Ok(code)
}

fn cmd_render(
    input: &CoordInput,
    plan: &Option<String>,
    variant: usize,
    params: &[String],
    svg: &str,
    tolerance: f64,
    run: &mut Run,
) -> Res<u8> {
    let (g, coords) = match plan {
        Some(name) => {
            let (plan, values) = load_plan(&PlanInput { plan: name.clone(), variant, params: params.to_vec() })?;
            let ex = execute(&plan, &values).map_err(|e| Failure { code: 3, msg: e.to_string() })?;
            (plan.graph, ex.coords)
        }
        None => {
            let (_, g, c) = load_coords(input, run)?;
            (g, c)
        }
    };
    let text = render_svg(&g, &coords, &SvgStyle { tolerance, ..SvgStyle::default() });
    if svg == "-" {
        print!("{text}");
    } else {
        run.write(Path::new(svg), &text)?;
    }
    run.finish("rendered", 0)?;
    Ok(0)
}

fn dispatch(cmd: &Cmd) -> Res<u8> {
    let mut run = Run { command: String::new(), inputs: BTreeMap::new(), options: json!({}), outputs: Vec::new() };
    match cmd {
        Cmd::Graph { input, compare, out } => {
            run.command = "graph".into();
            cmd_graph(input, compare, out, &mut run)
        }
        Cmd::Constraints { input, pins } => {
            run.command = "constraints".into();
            cmd_constraints(input, pins, &mut run)
        }
        Cmd::Groebner { input, pins, order, max_pairs, max_degree, max_work, extract, distinct_tol, out } => {
            run.command = "groebner".into();
            let limits = Limits { max_pairs: *max_pairs, max_degree: *max_degree, max_work: *max_work };
            run.options = json!({
                "order": format!("{order:?}").to_lowercase(), "pins": pins.pins, "saturate": pins.saturate,
                "limits": limits, "extract": extract, "distinct_tol": distinct_tol,
            });
            cmd_groebner(input, pins, *order, limits, *extract, *distinct_tol, out, &mut run)
        }
        Cmd::Solve { input, restarts, seed, residual_tol, separation_floor, max_iterations, init_box, rigidity, out } => {
            run.command = "solve".into();
            let opts = SolveOptions {
                restarts: *restarts,
                residual_tol: *residual_tol,
                separation_floor: *separation_floor,
                max_iterations: *max_iterations,
                seed: *seed,
                init_box: *init_box,
            };
            if opts.restarts == 0 || !(opts.residual_tol > 0.0 && opts.separation_floor > 0.0) {
                return Err(input_err("restarts and tolerances must be positive"));
            }
            run.options = json!(opts);
            cmd_solve(input, opts, *rigidity, out, &mut run)
        }
        Cmd::Verify { coords, max_edge_deviation, min_separation } => {
            run.command = "verify".into();
            let tol = VerifyTolerances { max_edge_deviation: *max_edge_deviation, min_separation: *min_separation };
            cmd_verify(coords, tol, &mut run)
        }
        Cmd::Refine { coords, similarity, max_iterations, out } => {
            run.command = "refine".into();
            run.options = json!({ "similarity": similarity, "max_iterations": max_iterations });
            cmd_refine(coords, *similarity, *max_iterations, out, &mut run)
        }
        Cmd::Rigidity { coords } => {
            run.command = "rigidity".into();
            cmd_rigidity(coords, &mut run)
        }
        Cmd::Plan { plan, out } => {
            run.command = "plan".into();
            run.options = json!({ "plan": plan.plan, "variant": plan.variant, "params": plan.params });
            cmd_plan(plan, out, &mut run)
        }
        Cmd::Sweep { sweep, table, out } => {
            run.command = "sweep".into();
            run.options = sweep_options(sweep);
            cmd_sweep(sweep, table, out, &mut run)
        }
        Cmd::Bisect { sweep, tol, bracket, table, out } => {
            run.command = "bisect".into();
            run.options = sweep_options(sweep);
            run.options["tol"] = json!(tol);
            cmd_bisect(sweep, *tol, *bracket, table, out, &mut run)
        }
        Cmd::Render { coords, plan, variant, params, svg, tolerance } => {
            run.command = "render".into();
            run.options = json!({ "plan": plan, "variant": variant, "params": params, "tolerance": tolerance });
            cmd_render(coords, plan, *variant, params, svg, *tolerance, &mut run)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
