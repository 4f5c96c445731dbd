//! Command-line front door: generate instances, query the exact oracle, run
//! the estimators, and sweep experiment grids into CSV.
//!
//! Reproducibility rules: all randomness flows from explicit `--seed` flags
//! (default 0, never wall-clock); JSON/CSV output is byte-identical across
//! reruns of the same invocation; wall-clock timings appear only behind
//! `--timing`. Failures print a JSON error object on stdout and exit with a
//! code per failure class: 2 usage/input/parse/io, 3 resource limits,
//! 4 numeric trouble.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complex::{
    generate_complete_partite, generate_disjoint_cliques, AnyComplex, CliqueComplex, Complex,
    ExplicitComplex, Graph,
};
use crate::estimators::{
    cbne, cbne_var, norm_bound, Algorithm, EstimateConfig, EstimateResult, DEFAULT_SAMPLE_BUDGET,
};
use crate::laplacian::DEFAULT_DENSE_GUARD;
use crate::oracle::{
    exact_betti_guarded, exact_normalized_traces, exact_second_moments, oracle_report,
};
use crate::randgraphs::{
    gen_gnp, gen_partite, regime_report, ErConfig, PartiteErConfig, RegimeLabel,
};
use crate::{fmt_f64, Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "cbne",
    version,
    about = "Monte Carlo estimation of normalized Betti numbers of simplicial complexes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Generate a graph instance and write it as an edge-list file.
    Gen {
        #[command(subcommand)]
        ensemble: GenEnsemble,
    },
    /// Exact linear-algebra report: Betti number, traces, second moments,
    /// bounds, spectrum.
    Exact(ExactArgs),
    /// Run one estimator and print its result as JSON.
    Estimate(EstimateArgs),
    /// Sweep a config grid of instances × parameters into a CSV file.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Subcommand)]
enum GenEnsemble {
    /// Uniform random graph: every vertex pair is an edge with probability p.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Balanced (k+1)-partite random graph with cross-part edge probability p.
    PartiteEr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Complete (k+1)-partite graph with parts of size m.
    CompletePartite {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// m disjoint copies of the complete graph on k+1 vertices.
    DisjointCliques {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

/// Exactly one input: a graph file (clique complex) or an explicit complex.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Edge-list graph file; its clique complex is the instance.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    /// Explicit-complex file listing maximal simplices.
    #[arg(long, value_name = "PATH")]
    complex: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<AnyComplex> {
        if let Some(path) = &self.graph {
            let text = fs::read_to_string(path)?;
            Ok(AnyComplex::Clique(CliqueComplex::new(Graph::parse(&text)?)))
        } else {
            let path = self
                .complex
                .as_ref()
                .expect("clap enforces the input group");
            let text = fs::read_to_string(path)?;
            Ok(AnyComplex::Explicit(ExplicitComplex::parse(&text)?))
        }
    }
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    /// Comma-separated path lengths to report on.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
    lengths: Vec<usize>,
    /// Largest |S_k| the dense oracle will accept.
    #[arg(long, default_value_t = DEFAULT_DENSE_GUARD)]
    dense_guard: usize,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// cbne or cbne-var
    #[arg(value_parser = parse_algorithm)]
    algorithm: Algorithm,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    /// Path length ℓ.
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Abort (exit 3) if a computed sample count exceeds this.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_BUDGET)]
    budget: u64,
    /// Include wall-clock elapsed_ms in the output (breaks byte-for-byte
    /// reproducibility).
    #[arg(long)]
    timing: bool,
    /// Dump the steps of the first N paths of worker 0 to stderr.
    #[arg(long, default_value_t = 0, value_name = "N")]
    trace_paths: usize,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// JSON grid file (see README for the schema).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// CSV output path; a manifest is written next to it.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Compute rows in parallel (row order in the CSV is unchanged).
    #[arg(long)]
    row_parallel: bool,
    /// Include wall-clock elapsed_ms in the CSV.
    #[arg(long)]
    timing: bool,
    /// Override the grid's per-estimator worker count.
    #[arg(long)]
    workers: Option<usize>,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses argv and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            println!("{}", to_pretty(&error_payload(&e)));
            exit_code(&e)
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Gen { ensemble } => cmd_gen(ensemble),
        Cmd::Exact(args) => cmd_exact(args),
        Cmd::Estimate(args) => cmd_estimate(args),
        Cmd::Experiment(args) => cmd_experiment(args),
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("JSON serialization")
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } | Error::Io(_) => 2,
        Error::Resource { .. } => 3,
        Error::Numeric(_) => 4,
    }
}

fn error_payload(e: &Error) -> serde_json::Value {
    let kind = match e {
        Error::InvalidInput(_) => "input",
        Error::Parse { .. } => "parse",
        Error::Io(_) => "io",
        Error::Resource { .. } => "resource",
        Error::Numeric(_) => "numeric",
    };
    let mut fields = serde_json::Map::new();
    fields.insert("kind".into(), kind.into());
    fields.insert("message".into(), e.to_string().into());
    if let Error::Resource {
        what,
        requested,
        limit,
    } = e
    {
        fields.insert("what".into(), what.as_str().into());
        fields.insert(
            "requested".into(),
            u64::try_from(*requested).unwrap_or(u64::MAX).into(),
        );
        fields.insert(
            "limit".into(),
            u64::try_from(*limit).unwrap_or(u64::MAX).into(),
        );
    }
    serde_json::Value::Object(
        [("error".to_string(), serde_json::Value::Object(fields))]
            .into_iter()
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct GenSummary {
    ensemble: &'static str,
    n: usize,
    edge_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    out: String,
}

fn cmd_gen(ensemble: GenEnsemble) -> Result<()> {
    let (graph, kind, seed, out) = match ensemble {
        GenEnsemble::Er { n, p, seed, out } => {
            let cfg = ErConfig { n, p, seed };
            (gen_gnp(&cfg)?, "er", Some(seed), out)
        }
        GenEnsemble::PartiteEr { n, k, p, seed, out } => {
            let cfg = PartiteErConfig { n, k, p, seed };
            (gen_partite(&cfg)?, "partite-er", Some(seed), out)
        }
        GenEnsemble::CompletePartite { k, m, out } => {
            let cx = generate_complete_partite(k, m)?;
            (cx.graph().clone(), "complete-partite", None, out)
        }
        GenEnsemble::DisjointCliques { m, k, out } => {
            let cx = generate_disjoint_cliques(m, k)?;
            (cx.graph().clone(), "disjoint-cliques", None, out)
        }
    };
    fs::write(&out, graph.to_file_string())?;
    let summary = GenSummary {
        ensemble: kind,
        n: graph.vertex_count(),
        edge_count: graph.edge_count(),
        seed,
        out: out.display().to_string(),
    };
    println!("{}", to_pretty(&summary));
    Ok(())
}

// ---------------------------------------------------------------------------
// exact / estimate
// ---------------------------------------------------------------------------

fn cmd_exact(args: ExactArgs) -> Result<()> {
    let cx = args.input.load()?;
    let report = oracle_report(&cx, args.k, &args.lengths, args.dense_guard)?;
    println!("{}", to_pretty(&report));
    Ok(())
}

fn cmd_estimate(args: EstimateArgs) -> Result<()> {
    let cx = args.input.load()?;
    let mut cfg = EstimateConfig::new(args.k, args.l, args.eps, args.eta);
    cfg.seed = args.seed;
    cfg.workers = args.workers;
    cfg.budget = args.budget;
    cfg.trace_paths = args.trace_paths;
    let mut result: EstimateResult = match args.algorithm {
        Algorithm::Cbne => cbne(&cx, &cfg)?,
        Algorithm::CbneVar => cbne_var(&cx, &cfg)?,
    };
    if args.timing {
        result.elapsed_ms = Some(result.elapsed.as_millis() as u64);
    }
    println!("{}", to_pretty(&result));
    Ok(())
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

fn default_count() -> usize {
    1
}
fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Cbne, Algorithm::CbneVar]
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_tolerance() -> f64 {
    0.1
}
fn default_workers() -> usize {
    1
}
fn default_budget() -> u64 {
    DEFAULT_SAMPLE_BUDGET
}
fn default_oracle() -> bool {
    true
}
fn default_dense_guard() -> usize {
    2048
}
fn default_betti_guard() -> usize {
    200
}

/// One instance family in the grid. Random ensembles expand `count` seeds
/// (seed, seed+1, …).
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum InstanceSpec {
    Er {
        n: usize,
        p: f64,
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_count")]
        count: usize,
    },
    PartiteEr {
        n: usize,
        k: usize,
        p: f64,
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_count")]
        count: usize,
    },
    CompletePartite {
        k: usize,
        m: usize,
    },
    DisjointCliques {
        m: usize,
        k: usize,
    },
    GraphFile {
        path: String,
    },
    ComplexFile {
        path: String,
    },
}

/// Experiment grid: rows are the cross product
/// instances × lengths × seeds × algorithms.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentGrid {
    #[serde(default)]
    instances: Vec<InstanceSpec>,
    k: usize,
    lengths: Vec<usize>,
    #[serde(default = "default_algorithms")]
    algorithms: Vec<Algorithm>,
    #[serde(default = "default_tolerance")]
    eps: f64,
    #[serde(default = "default_tolerance")]
    eta: f64,
    #[serde(default = "default_seeds")]
    seeds: Vec<u64>,
    #[serde(default = "default_workers")]
    workers: usize,
    #[serde(default = "default_budget")]
    budget: u64,
    /// Attach exact oracle columns where the guards allow.
    #[serde(default = "default_oracle")]
    oracle: bool,
    /// Largest |S_k| for the exact trace/second-moment columns.
    #[serde(default = "default_dense_guard")]
    dense_guard: usize,
    /// Largest simplex count for the (cubic, exact-integer) Betti column.
    #[serde(default = "default_betti_guard")]
    betti_guard: usize,
}

struct Instance {
    label: String,
    ensemble: &'static str,
    n: usize,
    p: Option<f64>,
    graph_seed: Option<u64>,
    complex: AnyComplex,
}

#[derive(Debug, Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct RunManifest {
    subcommand: &'static str,
    version: &'static str,
    config_path: String,
    config_sha256: String,
    inputs: Vec<InputDigest>,
    out: String,
    output_sha256: String,
    rows: usize,
    workers: usize,
    row_parallel: bool,
    timing: bool,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        write!(out, "{b:02x}").expect("string write");
    }
    out
}

fn expand_instances(specs: &[InstanceSpec]) -> Result<(Vec<Instance>, Vec<InputDigest>)> {
    let mut instances = Vec::new();
    let mut digests: BTreeMap<String, String> = BTreeMap::new();
    for spec in specs {
        match spec {
            InstanceSpec::Er { n, p, seed, count } => {
                for i in 0..*count {
                    let s = seed.wrapping_add(i as u64);
                    let graph = gen_gnp(&ErConfig {
                        n: *n,
                        p: *p,
                        seed: s,
                    })?;
                    instances.push(Instance {
                        label: format!("er-n{n}-p{p}-s{s}"),
                        ensemble: "er",
                        n: *n,
                        p: Some(*p),
                        graph_seed: Some(s),
                        complex: AnyComplex::Clique(CliqueComplex::new(graph)),
                    });
                }
            }
            InstanceSpec::PartiteEr {
                n,
                k,
                p,
                seed,
                count,
            } => {
                for i in 0..*count {
                    let s = seed.wrapping_add(i as u64);
                    let graph = gen_partite(&PartiteErConfig {
                        n: *n,
                        k: *k,
                        p: *p,
                        seed: s,
                    })?;
                    instances.push(Instance {
                        label: format!("partite-er-n{n}-k{k}-p{p}-s{s}"),
                        ensemble: "partite-er",
                        n: *n,
                        p: Some(*p),
                        graph_seed: Some(s),
                        complex: AnyComplex::Clique(CliqueComplex::new(graph)),
                    });
                }
            }
            InstanceSpec::CompletePartite { k, m } => {
                let cx = generate_complete_partite(*k, *m)?;
                instances.push(Instance {
                    label: format!("complete-partite-k{k}-m{m}"),
                    ensemble: "complete-partite",
                    n: cx.vertex_count(),
                    p: None,
                    graph_seed: None,
                    complex: AnyComplex::Clique(cx),
                });
            }
            InstanceSpec::DisjointCliques { m, k } => {
                let cx = generate_disjoint_cliques(*m, *k)?;
                instances.push(Instance {
                    label: format!("disjoint-cliques-m{m}-k{k}"),
                    ensemble: "disjoint-cliques",
                    n: cx.vertex_count(),
                    p: None,
                    graph_seed: None,
                    complex: AnyComplex::Clique(cx),
                });
            }
            InstanceSpec::GraphFile { path } => {
                let bytes = fs::read(path)?;
                digests.insert(path.clone(), sha256_hex(&bytes));
                let text = String::from_utf8_lossy(&bytes);
                let graph = Graph::parse(&text)?;
                instances.push(Instance {
                    label: format!("graph:{path}"),
                    ensemble: "graph-file",
                    n: graph.vertex_count(),
                    p: None,
                    graph_seed: None,
                    complex: AnyComplex::Clique(CliqueComplex::new(graph)),
                });
            }
            InstanceSpec::ComplexFile { path } => {
                let bytes = fs::read(path)?;
                digests.insert(path.clone(), sha256_hex(&bytes));
                let text = String::from_utf8_lossy(&bytes);
                let cx = ExplicitComplex::parse(&text)?;
                instances.push(Instance {
                    label: format!("complex:{path}"),
                    ensemble: "complex-file",
                    n: cx.vertex_count(),
                    p: None,
                    graph_seed: None,
                    complex: AnyComplex::Explicit(cx),
                });
            }
        }
    }
    let digests = digests
        .into_iter()
        .map(|(path, sha256)| InputDigest { path, sha256 })
        .collect();
    Ok((instances, digests))
}

/// Exact columns shared by all rows of one instance, or None where a guard
/// (or empty S_k) rules the oracle out.
struct OracleCell {
    s_k: usize,
    traces: Option<Vec<f64>>,
    seconds: Option<Vec<f64>>,
    betti: Option<u64>,
}

fn oracle_cell(inst: &Instance, grid: &ExperimentGrid) -> OracleCell {
    let s_k = inst.complex.enumerate_k_simplices(grid.k).len();
    if !grid.oracle || s_k == 0 {
        return OracleCell {
            s_k,
            traces: None,
            seconds: None,
            betti: None,
        };
    }
    let traces =
        exact_normalized_traces(&inst.complex, grid.k, &grid.lengths, grid.dense_guard).ok();
    let seconds = exact_second_moments(&inst.complex, grid.k, &grid.lengths, grid.dense_guard).ok();
    let betti = exact_betti_guarded(&inst.complex, grid.k, grid.betti_guard).ok();
    OracleCell {
        s_k,
        traces,
        seconds,
        betti,
    }
}

struct RowOut {
    label: String,
    ensemble: &'static str,
    n: usize,
    s_k: usize,
    k: usize,
    l: usize,
    p: Option<f64>,
    graph_seed: Option<u64>,
    algorithm: Algorithm,
    seed: u64,
    eps: f64,
    eta: f64,
    c: u64,
    regime: Option<RegimeLabel>,
    n_s: Option<u64>,
    n_p: Option<u64>,
    v_hat: Option<f64>,
    estimate: Option<f64>,
    empirical_variance: Option<f64>,
    exact_trace: Option<f64>,
    abs_error: Option<f64>,
    exact_second_moment: Option<f64>,
    betti: Option<u64>,
    normalized_betti: Option<f64>,
    elapsed_ms: Option<u64>,
    status: String,
}

const CSV_HEADER: &str = "instance,ensemble,n,s_k,k,l,p,graph_seed,algorithm,seed,eps,eta,c,\
regime,n_s,n_p,v_hat,estimate,empirical_variance,exact_trace,abs_error,exact_second_moment,\
betti,normalized_betti,elapsed_ms,status";

/// Minimal CSV quoting: fields containing a comma, quote, or newline are
/// wrapped in double quotes with inner quotes doubled.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn opt_num<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_row(out: &mut String, r: &RowOut) {
    let fields = [
        csv_field(&r.label),
        r.ensemble.to_string(),
        r.n.to_string(),
        r.s_k.to_string(),
        r.k.to_string(),
        r.l.to_string(),
        opt_f64(r.p),
        opt_num(r.graph_seed),
        r.algorithm.to_string(),
        r.seed.to_string(),
        fmt_f64(r.eps),
        fmt_f64(r.eta),
        r.c.to_string(),
        r.regime.map(|x| x.to_string()).unwrap_or_default(),
        opt_num(r.n_s),
        opt_num(r.n_p),
        opt_f64(r.v_hat),
        opt_f64(r.estimate),
        opt_f64(r.empirical_variance),
        opt_f64(r.exact_trace),
        opt_f64(r.abs_error),
        opt_f64(r.exact_second_moment),
        opt_num(r.betti),
        opt_f64(r.normalized_betti),
        opt_num(r.elapsed_ms),
        csv_field(&r.status),
    ];
    out.push_str(&fields.join(","));
    out.push('\n');
}

struct RowSpec {
    inst_idx: usize,
    l_idx: usize,
    algorithm: Algorithm,
    seed: u64,
}

#[allow(clippy::too_many_arguments)]
fn compute_row(
    spec: &RowSpec,
    instances: &[Instance],
    cells: &[OracleCell],
    grid: &ExperimentGrid,
    workers: usize,
    timing: bool,
) -> RowOut {
    let inst = &instances[spec.inst_idx];
    let cell = &cells[spec.inst_idx];
    let l = grid.lengths[spec.l_idx];
    let exact_trace = cell.traces.as_ref().map(|t| t[spec.l_idx]);
    let exact_second_moment = cell.seconds.as_ref().map(|t| t[spec.l_idx]);
    let regime = match inst.ensemble {
        "er" | "partite-er" => inst.p.map(|p| regime_report(inst.n, grid.k, p, l).label),
        _ => None,
    };
    let mut row = RowOut {
        label: inst.label.clone(),
        ensemble: inst.ensemble,
        n: inst.n,
        s_k: cell.s_k,
        k: grid.k,
        l,
        p: inst.p,
        graph_seed: inst.graph_seed,
        algorithm: spec.algorithm,
        seed: spec.seed,
        eps: grid.eps,
        eta: grid.eta,
        c: norm_bound(&inst.complex),
        regime,
        n_s: None,
        n_p: None,
        v_hat: None,
        estimate: None,
        empirical_variance: None,
        exact_trace,
        abs_error: None,
        exact_second_moment,
        betti: cell.betti,
        normalized_betti: cell.betti.map(|b| b as f64 / cell.s_k as f64),
        elapsed_ms: None,
        status: "ok".into(),
    };
    let mut cfg = EstimateConfig::new(grid.k, l, grid.eps, grid.eta);
    cfg.seed = spec.seed;
    cfg.workers = workers;
    cfg.budget = grid.budget;
    let result = match spec.algorithm {
        Algorithm::Cbne => cbne(&inst.complex, &cfg),
        Algorithm::CbneVar => cbne_var(&inst.complex, &cfg),
    };
    match result {
        Ok(res) => {
            row.n_s = Some(res.n_s);
            row.n_p = Some(res.n_p);
            row.v_hat = res.v_hat;
            row.estimate = Some(res.estimate);
            row.empirical_variance = Some(res.empirical_variance);
            row.abs_error = exact_trace.map(|t| (res.estimate - t).abs());
            if timing {
                row.elapsed_ms = Some(res.elapsed.as_millis() as u64);
            }
        }
        Err(e) => row.status = e.to_string(),
    }
    row
}

fn compute_rows(
    specs: &[RowSpec],
    instances: &[Instance],
    cells: &[OracleCell],
    grid: &ExperimentGrid,
    workers: usize,
    timing: bool,
    row_parallel: bool,
) -> Vec<RowOut> {
    if !row_parallel || specs.len() <= 1 {
        return specs
            .iter()
            .map(|s| compute_row(s, instances, cells, grid, workers, timing))
            .collect();
    }
    let threads = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(specs.len());
    let mut slots: Vec<Option<RowOut>> = specs.iter().map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    let mut local = Vec::new();
                    let mut i = t;
                    while i < specs.len() {
                        local.push((
                            i,
                            compute_row(&specs[i], instances, cells, grid, workers, timing),
                        ));
                        i += threads;
                    }
                    local
                })
            })
            .collect();
        for handle in handles {
            for (i, row) in handle.join().expect("row worker panicked") {
                slots[i] = Some(row);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("row computed"))
        .collect()
}

fn cmd_experiment(args: ExperimentArgs) -> Result<()> {
    let config_bytes = fs::read(&args.config)?;
    let grid: ExperimentGrid = serde_json::from_slice(&config_bytes).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    if grid.k == 0 {
        return Err(Error::InvalidInput("grid k must be ≥ 1".into()));
    }
    if grid.lengths.contains(&0) {
        return Err(Error::InvalidInput("grid lengths must be ≥ 1".into()));
    }
    let workers = args.workers.unwrap_or(grid.workers);
    if workers == 0 {
        return Err(Error::InvalidInput("workers must be ≥ 1".into()));
    }

    let (instances, inputs) = expand_instances(&grid.instances)?;
    let cells: Vec<OracleCell> = instances.iter().map(|i| oracle_cell(i, &grid)).collect();

    let mut specs = Vec::new();
    for inst_idx in 0..instances.len() {
        for l_idx in 0..grid.lengths.len() {
            for &seed in &grid.seeds {
                for &algorithm in &grid.algorithms {
                    specs.push(RowSpec {
                        inst_idx,
                        l_idx,
                        algorithm,
                        seed,
                    });
                }
            }
        }
    }

    let rows = compute_rows(
        &specs,
        &instances,
        &cells,
        &grid,
        workers,
        args.timing,
        args.row_parallel,
    );

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        write_row(&mut csv, row);
    }
    fs::write(&args.out, csv.as_bytes())?;

    let manifest = RunManifest {
        subcommand: "experiment",
        version: env!("CARGO_PKG_VERSION"),
        config_path: args.config.display().to_string(),
        config_sha256: sha256_hex(&config_bytes),
        inputs,
        out: args.out.display().to_string(),
        output_sha256: sha256_hex(csv.as_bytes()),
        rows: rows.len(),
        workers,
        row_parallel: args.row_parallel,
        timing: args.timing,
    };
    let mut manifest_path = args.out.as_os_str().to_owned();
    manifest_path.push(".manifest.json");
    fs::write(PathBuf::from(manifest_path), to_pretty(&manifest))?;
    println!("{}", to_pretty(&manifest));
    Ok(())
}
