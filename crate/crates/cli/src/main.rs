//! Command-line front end: instance generators, clustering with cost
//! reports, stored-tree audits, experiment drivers, and the
//! satisfiability reduction.
//!
//! Every command is deterministic given its `--seed`; rerunning
//! reproduces output files byte for byte. Exit codes: 0 success, 1 usage
//! error, 2 data or validation error.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use hiercost::{
    assignment_to_tree, cost, derive_seed, epsilon_good, gen_clique, gen_general_planted, gen_line,
    gen_planted, gen_two_cliques, generalized_cost, linkage, load_graph, make_tree,
    make_tree_generalized, naesat_brute, optimal_tree_bruteforce, parse_dimacs, planted_experiment,
    reduce_to_graph, remove_redundancies, ClusterTree, CutMode, Graph, LinkageMethod,
    ScalingFunction, TrialRow,
};

#[derive(Parser)]
#[command(name = "hiercost", version, about = "Cost-based hierarchical clustering toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance as an edge list plus a JSON sidecar
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Build a hierarchy over a graph and report its cost
    Cluster(ClusterArgs),
    /// Audit a stored tree against a graph with both cost forms
    Cost(CostArgs),
    /// Run an experiment described by a TOML config, emitting CSV
    Experiment(ExperimentArgs),
    /// Reduce a CNF formula to a weighted graph with its cost threshold
    Reduce(ReduceArgs),
}

#[derive(Subcommand)]
enum GenKind {
    /// Unit-weight path
    Line {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Unit-weight complete graph
    Clique {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Two disjoint unit-weight cliques
    TwoCliques {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Two-block random graph: within-block edge probability p, across q
    Planted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random graph with arbitrary block sizes and per-block probabilities
    GeneralPlanted {
        /// Comma-separated block sizes, e.g. 4,4,3
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Comma-separated within-block probabilities, one per block
        #[arg(long = "in-prob", value_delimiter = ',')]
        in_prob: Vec<f64>,
        /// Across-block edge probability
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ClusterArgs {
    /// Graph file (edge-list format)
    graph: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    /// Scaling function (linear, log, pow:<a>); greedy-f and optimal only
    #[arg(long)]
    f: Option<String>,
    /// Cut solver for the greedy methods (default exact)
    #[arg(long, value_enum)]
    cut: Option<CutArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the tree JSON here; the report always goes to stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Greedy,
    GreedyF,
    Single,
    Average,
    Complete,
    Optimal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CutArg {
    Exact,
    Heuristic,
}

#[derive(Args)]
struct CostArgs {
    /// Graph file (edge-list format)
    graph: PathBuf,
    /// Tree file (nested-list JSON)
    tree: PathBuf,
    /// Scaling function (linear, log, pow:<a>)
    #[arg(long)]
    f: Option<String>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML config file
    config: PathBuf,
    /// Write the CSV here (with a summary on stdout) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for trial parallelism
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ReduceArgs {
    /// DIMACS CNF file
    cnf: PathBuf,
    /// Write the gadget graph here (metadata in <out>.json)
    #[arg(long)]
    out: PathBuf,
    /// Brute-force a satisfying assignment and emit its tree
    #[arg(long)]
    witness: bool,
}

enum Failure {
    Usage(String),
    Data(String),
}

type CliResult<T> = Result<T, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn data(e: impl std::fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen { kind } => cmd_gen(kind),
        Command::Cluster(a) => cmd_cluster(a),
        Command::Cost(a) => cmd_cost(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Reduce(a) => cmd_reduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {}", path.display(), e)))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Data(format!("{}: {}", path.display(), e)))
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    load_graph(&read_file(path)?).map_err(|e| Failure::Data(format!("{}: {}", path.display(), e)))
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn parse_scaling(spec: &str) -> CliResult<ScalingFunction> {
    match spec {
        "linear" => Ok(ScalingFunction::Linear),
        "log" => Ok(ScalingFunction::Log),
        _ => match spec.strip_prefix("pow:") {
            Some(a) => {
                let exp: f64 =
                    a.parse().map_err(|_| usage(format!("bad power exponent '{}'", a)))?;
                ScalingFunction::power(exp).map_err(usage)
            }
            None => Err(usage(format!(
                "unknown scaling '{}': expected linear, log, or pow:<a>",
                spec
            ))),
        },
    }
}

/// Writes the graph to `out`, the metadata JSON to `<out>.json`, and the
/// same metadata compactly to stdout.
fn emit_instance(out: &Path, g: &Graph, meta: Value) -> CliResult<()> {
    write_file(out, &g.to_text())?;
    write_file(&sidecar(out), &format!("{:#}\n", meta))?;
    println!("{}", meta);
    Ok(())
}

fn cmd_gen(kind: GenKind) -> CliResult<()> {
    match kind {
        GenKind::Line { n, out } => {
            if n == 0 {
                return Err(usage("line needs --n >= 1"));
            }
            emit_instance(&out, &gen_line(n), json!({"kind": "line", "n": n}))
        }
        GenKind::Clique { n, out } => {
            if n == 0 {
                return Err(usage("clique needs --n >= 1"));
            }
            emit_instance(&out, &gen_clique(n), json!({"kind": "clique", "n": n}))
        }
        GenKind::TwoCliques { l, r, out } => {
            if l + r == 0 {
                return Err(usage("two-cliques needs --l + --r >= 1"));
            }
            let (g, left, right) = gen_two_cliques(l, r);
            let meta = json!({"kind": "two-cliques", "l": l, "r": r, "L": left, "R": right});
            emit_instance(&out, &g, meta)
        }
        GenKind::Planted { n, p, q, seed, out } => {
            let (g, left, right) = gen_planted(n, p, q, seed).map_err(usage)?;
            let meta = json!({
                "kind": "planted", "n": n, "p": p, "q": q, "seed": seed,
                "L": left, "R": right,
            });
            emit_instance(&out, &g, meta)
        }
        GenKind::GeneralPlanted { sizes, in_prob, q, seed, out } => {
            if sizes.iter().sum::<usize>() == 0 {
                return Err(usage("general-planted needs at least one node"));
            }
            if in_prob.len() != sizes.len() {
                return Err(usage("--in-prob needs one probability per block"));
            }
            let mut block_of = Vec::new();
            for (b, &s) in sizes.iter().enumerate() {
                block_of.extend(std::iter::repeat_n(b, s));
            }
            let (g, assignment) =
                gen_general_planted(&sizes, |i, _| in_prob[block_of[i]], q, seed).map_err(usage)?;
            let meta = json!({
                "kind": "general-planted", "sizes": sizes, "in_prob": in_prob,
                "q": q, "seed": seed, "blocks": assignment,
            });
            emit_instance(&out, &g, meta)
        }
    }
}

fn cmd_cluster(a: ClusterArgs) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let f = a.f.as_deref().map(parse_scaling).transpose()?;
    if f.is_some() && !matches!(a.method, Method::GreedyF | Method::Optimal) {
        return Err(usage("--f applies only to greedy-f and optimal"));
    }
    if a.cut.is_some() && !matches!(a.method, Method::Greedy | Method::GreedyF) {
        return Err(usage("--cut applies only to greedy and greedy-f"));
    }
    let mode = match a.cut.unwrap_or(CutArg::Exact) {
        CutArg::Exact => CutMode::Exact,
        CutArg::Heuristic => CutMode::Heuristic,
    };
    let mut meta = Map::new();
    let tree = match a.method {
        Method::Greedy | Method::GreedyF => {
            let built = match a.method {
                Method::Greedy => make_tree(&g, mode, a.seed).map_err(data)?,
                _ => {
                    let f = f.as_ref().ok_or_else(|| usage("greedy-f requires --f"))?;
                    make_tree_generalized(&g, f, mode, a.seed).map_err(data)?
                }
            };
            let cut = if mode == CutMode::Exact { "exact" } else { "heuristic" };
            meta.insert("cut".into(), json!(cut));
            meta.insert("certified".into(), json!(built.certified));
            meta.insert("seed".into(), json!(a.seed));
            built.tree
        }
        Method::Single => linkage(&g, LinkageMethod::Single).map_err(data)?,
        Method::Average => linkage(&g, LinkageMethod::Average).map_err(data)?,
        Method::Complete => linkage(&g, LinkageMethod::Complete).map_err(data)?,
        Method::Optimal => optimal_tree_bruteforce(&g, f.as_ref()).map_err(data)?.0,
    };
    let report = match &f {
        Some(f) => generalized_cost(&g, &tree, f).map_err(data)?,
        None => cost(&g, &tree).map_err(data)?,
    };
    let method = match a.method {
        Method::Greedy => "greedy",
        Method::GreedyF => "greedy-f",
        Method::Single => "single",
        Method::Average => "average",
        Method::Complete => "complete",
        Method::Optimal => "optimal",
    };
    meta.insert("method".into(), json!(method));
    meta.insert("n".into(), json!(g.n()));
    meta.insert("f".into(), json!(f.map_or("linear".to_string(), |f| f.to_string())));
    meta.insert("cost".into(), serde_json::to_value(&report).expect("serializable"));
    meta.insert("tree".into(), serde_json::to_value(tree.nested()).expect("serializable"));
    if let Some(out) = &a.out {
        write_file(out, &format!("{}\n", tree.to_json()))?;
    }
    println!("{}", Value::Object(meta));
    Ok(())
}

fn cmd_cost(a: CostArgs) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let t = ClusterTree::from_json(&read_file(&a.tree)?)
        .map_err(|e| Failure::Data(format!("{}: {}", a.tree.display(), e)))?;
    let f = a.f.as_deref().map(parse_scaling).transpose()?;
    let report = match &f {
        Some(f) => generalized_cost(&g, &t, f),
        None => cost(&g, &t),
    }
    .map_err(data)?;
    let out = json!({
        "f": f.map_or("linear".to_string(), |f| f.to_string()),
        "total": report.total,
        "split_total": report.split_total(),
        "difference": report.total - report.split_total(),
        "splits": report.splits,
    });
    println!("{}", out);
    Ok(())
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum ExperimentConfig {
    Planted(PlantedConfig),
    Approximation(ApproxConfig),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlantedConfig {
    n: usize,
    p: f64,
    q: f64,
    trials: usize,
    eps: EpsSpec,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_methods")]
    methods: Vec<String>,
}

fn default_methods() -> Vec<String> {
    vec!["greedy".to_string()]
}

/// A single threshold or a list of them; each gets its own CSV block.
#[derive(Deserialize)]
#[serde(untagged)]
enum EpsSpec {
    One(f64),
    Many(Vec<f64>),
}

impl EpsSpec {
    fn values(&self) -> Vec<f64> {
        match self {
            EpsSpec::One(e) => vec![*e],
            EpsSpec::Many(v) => v.clone(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ApproxConfig {
    count: usize,
    max_n: usize,
    edge_prob: f64,
    #[serde(default)]
    seed: u64,
    f: Option<String>,
}

const CSV_HEADER: &str = "trial,n,p,q,method,cost,optimal_cost,ratio,eps,eps_good";

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn cmd_experiment(a: ExperimentArgs) -> CliResult<()> {
    if a.jobs == 0 {
        return Err(usage("--jobs must be >= 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build_global()
        .map_err(|e| data(format!("thread pool: {}", e)))?;
    let text = read_file(&a.config)?;
    let config: ExperimentConfig = toml::from_str(&text)
        .map_err(|e| Failure::Data(format!("{}: {}", a.config.display(), e)))?;
    let (csv, summary) = match config {
        ExperimentConfig::Planted(c) => run_planted(&c)?,
        ExperimentConfig::Approximation(c) => run_approximation(&c)?,
    };
    match &a.out {
        Some(path) => {
            write_file(path, &csv)?;
            println!("{}", summary);
        }
        None => print!("{}", csv),
    }
    Ok(())
}

/// One emitted CSV record, shared by the live methods and the baselines.
struct RowData {
    trial: usize,
    method: String,
    cost: f64,
    optimal_cost: Option<f64>,
    ratio: Option<f64>,
    eps_good: bool,
}

impl RowData {
    fn from_trial(r: &TrialRow) -> RowData {
        RowData {
            trial: r.trial,
            method: r.method.to_string(),
            cost: r.cost,
            optimal_cost: r.optimal_cost,
            ratio: r.ratio,
            eps_good: r.eps_good,
        }
    }

    fn csv(&self, n: usize, p: f64, q: f64, eps: f64) -> String {
        [
            self.trial.to_string(),
            n.to_string(),
            p.to_string(),
            q.to_string(),
            self.method.clone(),
            self.cost.to_string(),
            fmt_opt(self.optimal_cost),
            fmt_opt(self.ratio),
            eps.to_string(),
            self.eps_good.to_string(),
        ]
        .join(",")
    }
}

/// Linkage baseline on one sampled graph: the tree does not depend on
/// eps, so goodness is precomputed for every configured threshold.
struct BaselineTrial {
    trial: usize,
    method: &'static str,
    cost: f64,
    good_per_eps: Vec<bool>,
}

fn run_planted(c: &PlantedConfig) -> CliResult<(String, Value)> {
    if c.trials == 0 {
        return Err(data("trials must be >= 1"));
    }
    let eps_values = c.eps.values();
    if eps_values.is_empty() {
        return Err(data("eps needs at least one value"));
    }
    if !c.methods.iter().any(|m| m == "greedy") {
        return Err(data("methods must include greedy"));
    }
    let mut baselines = Vec::new();
    for m in &c.methods {
        match m.as_str() {
            "greedy" => {}
            "single" => baselines.push(LinkageMethod::Single),
            "average" => baselines.push(LinkageMethod::Average),
            "complete" => baselines.push(LinkageMethod::Complete),
            other => {
                return Err(data(format!(
                    "unknown method '{}': expected greedy, single, average, complete",
                    other
                )))
            }
        }
    }

    let mut baseline_rows: Vec<BaselineTrial> = Vec::new();
    for trial in 0..c.trials {
        let trial_seed = derive_seed(c.seed, trial as u64);
        let (g, left, right) = gen_planted(c.n, c.p, c.q, trial_seed).map_err(data)?;
        for &m in &baselines {
            let t = linkage(&g, m).map_err(data)?;
            let tree_cost = cost(&g, &t).map_err(data)?.total;
            let good = eps_values
                .iter()
                .map(|&e| epsilon_good(&t, &left, &right, e).map(|w| w.is_some()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(data)?;
            baseline_rows.push(BaselineTrial {
                trial,
                method: m.name(),
                cost: tree_cost,
                good_per_eps: good,
            });
        }
    }

    let mut lines = vec![CSV_HEADER.to_string()];
    let mut aggregates = Vec::new();
    for (ei, &eps) in eps_values.iter().enumerate() {
        let exp = planted_experiment(c.n, c.p, c.q, c.trials, eps, c.seed).map_err(data)?;
        let opt_by_trial: HashMap<usize, f64> = exp
            .rows
            .iter()
            .filter(|r| r.method == "optimal")
            .map(|r| (r.trial, r.cost))
            .collect();
        let mut rows: Vec<RowData> = Vec::new();
        for trial in 0..c.trials {
            rows.extend(exp.rows.iter().filter(|r| r.trial == trial).map(RowData::from_trial));
            for b in baseline_rows.iter().filter(|b| b.trial == trial) {
                let optimal_cost = opt_by_trial.get(&trial).copied();
                rows.push(RowData {
                    trial,
                    method: b.method.to_string(),
                    cost: b.cost,
                    optimal_cost,
                    ratio: optimal_cost.filter(|&o| o > 0.0).map(|o| b.cost / o),
                    eps_good: b.good_per_eps[ei],
                });
            }
        }
        lines.extend(rows.iter().map(|r| r.csv(c.n, c.p, c.q, eps)));

        let mut method_order: Vec<String> = Vec::new();
        for r in &rows {
            if !method_order.contains(&r.method) {
                method_order.push(r.method.clone());
            }
        }
        for m in &method_order {
            let picked: Vec<&RowData> = rows.iter().filter(|r| &r.method == m).collect();
            let mean_cost = picked.iter().map(|r| r.cost).sum::<f64>() / picked.len() as f64;
            let opts: Vec<f64> = picked.iter().filter_map(|r| r.optimal_cost).collect();
            let mean_opt = (opts.len() == picked.len())
                .then(|| opts.iter().sum::<f64>() / opts.len() as f64);
            let max_ratio = picked
                .iter()
                .filter_map(|r| r.ratio)
                .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
            let rate = picked.iter().filter(|r| r.eps_good).count() as f64 / picked.len() as f64;
            lines.push(
                [
                    "all".to_string(),
                    c.n.to_string(),
                    c.p.to_string(),
                    c.q.to_string(),
                    m.clone(),
                    mean_cost.to_string(),
                    fmt_opt(mean_opt),
                    fmt_opt(max_ratio),
                    eps.to_string(),
                    rate.to_string(),
                ]
                .join(","),
            );
            aggregates.push(json!({
                "eps": eps, "method": m, "mean_cost": mean_cost,
                "max_ratio": max_ratio, "eps_good_rate": rate,
            }));
        }
    }
    let summary = json!({
        "kind": "planted", "n": c.n, "p": c.p, "q": c.q,
        "trials": c.trials, "seed": c.seed, "aggregates": aggregates,
    });
    Ok((lines.join("\n") + "\n", summary))
}

fn run_approximation(c: &ApproxConfig) -> CliResult<(String, Value)> {
    if c.count == 0 {
        return Err(data("count must be >= 1"));
    }
    if c.max_n < 2 {
        return Err(data("max_n must be >= 2"));
    }
    if !(c.edge_prob > 0.0 && c.edge_prob <= 1.0) {
        return Err(data("edge_prob must lie in (0, 1]"));
    }
    let f = match c.f.as_deref() {
        Some(spec) => Some(parse_scaling(spec).map_err(|e| match e {
            Failure::Usage(m) | Failure::Data(m) => Failure::Data(m),
        })?),
        None => None,
    };
    let rows = hiercost::approximation_experiment(c.count, c.max_n, c.edge_prob, c.seed, f.as_ref())
        .map_err(data)?;
    let method = match &f {
        None => "greedy".to_string(),
        Some(f) => format!("greedy-f:{}", f),
    };
    let mut lines = vec![CSV_HEADER.to_string()];
    for r in &rows {
        lines.push(
            [
                r.idx.to_string(),
                r.n.to_string(),
                c.edge_prob.to_string(),
                String::new(),
                method.clone(),
                r.greedy_cost.to_string(),
                r.optimal_cost.to_string(),
                r.ratio.to_string(),
                String::new(),
                String::new(),
            ]
            .join(","),
        );
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let violations = rows.iter().filter(|r| r.ratio > r.bound).count();
    let mean = |pick: fn(&hiercost::RatioRow) -> f64| {
        rows.iter().map(pick).sum::<f64>() / rows.len() as f64
    };
    lines.push(
        [
            "all".to_string(),
            c.max_n.to_string(),
            c.edge_prob.to_string(),
            String::new(),
            method.clone(),
            mean(|r| r.greedy_cost).to_string(),
            mean(|r| r.optimal_cost).to_string(),
            max_ratio.to_string(),
            String::new(),
            String::new(),
        ]
        .join(","),
    );
    let summary = json!({
        "kind": "approximation", "count": c.count, "max_n": c.max_n,
        "edge_prob": c.edge_prob, "seed": c.seed, "method": method,
        "max_ratio": max_ratio, "bound_violations": violations,
    });
    Ok((lines.join("\n") + "\n", summary))
}

fn cmd_reduce(a: ReduceArgs) -> CliResult<()> {
    let text = read_file(&a.cnf)?;
    let phi = parse_dimacs(&text)
        .map_err(|e| Failure::Data(format!("{}: {}", a.cnf.display(), e)))?;
    let phi = remove_redundancies(&phi);
    let red = reduce_to_graph(&phi).map_err(data)?;
    let (m3, m2) = phi.clause_counts();
    let mut meta = Map::new();
    meta.insert("num_vars".into(), json!(phi.num_vars()));
    meta.insert("clauses_3".into(), json!(m3));
    meta.insert("clauses_2".into(), json!(m2));
    meta.insert("w".into(), json!(red.w));
    meta.insert("m_threshold".into(), json!(red.m_threshold));
    meta.insert("nodes".into(), json!(red.graph.n()));
    meta.insert("edges".into(), json!(red.graph.num_edges()));
    meta.insert("literal_nodes".into(), json!(red.literal_nodes));
    if a.witness {
        match naesat_brute(&phi).map_err(data)? {
            Some(assignment) => {
                let tree = assignment_to_tree(&phi, &assignment).map_err(data)?;
                let audited = cost(&red.graph, &tree).map_err(data)?;
                meta.insert("satisfiable".into(), json!(true));
                meta.insert(
                    "witness".into(),
                    json!({
                        "assignment": assignment,
                        "cost": audited.total,
                        "meets_threshold": audited.total == red.m_threshold as f64,
                        "tree": tree.nested(),
                    }),
                );
            }
            None => {
                meta.insert("satisfiable".into(), json!(false));
                meta.insert("witness".into(), Value::Null);
            }
        }
    }
    write_file(&a.out, &red.graph.to_text())?;
    let meta = Value::Object(meta);
    write_file(&sidecar(&a.out), &format!("{:#}\n", meta))?;
    println!("{}", meta);
    Ok(())
}
