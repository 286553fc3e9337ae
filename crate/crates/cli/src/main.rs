use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use resilience_core::classify::{
    audit_atyp_size, audit_edge_counts, audit_neighbourhoods, chernoff_tail_bounds, classify_vertices,
};
use resilience_core::experiments::{
    emit, parse_seed, run_study, write_records_csv, ExperimentConfig, Format, Study, StudyDocument,
};
use resilience_core::graph::{giant_component, k_core, read_graph, write_graph, Subgraph};
use resilience_core::process::{
    graph_at, hitting_time_k_connectivity, hitting_time_min_degree, pair_count, sample_coupled, sample_gnm, sample_gnp,
    sample_process,
};
use resilience_core::resilience::{
    budget_allows, cherry_attack, connectivity_resilience_threshold, find_disconnecting_attack, find_k_conn_attack,
    greedy_partition_attack, parse_alpha, verify_certificate, LocalSearch,
};
use resilience_core::{AttackOutcome, BudgetRule, Cut, Error, Graph};

#[derive(Parser)]
#[command(
    name = "resilience",
    version,
    about = "Random graph processes and edge-deletion resilience of connectivity",
    after_help = "Exit status: 0 success, 1 negative result (resilient, property fails, \
certificate rejected), 2 usage error, 3 runtime error."
)]
struct Cli {
    /// Write the main output to PATH instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random graph
    #[command(subcommand)]
    Sample(SampleKind),
    /// Hitting times of minimum degree and connectivity on a seeded process
    HittingTimes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Also report the hitting times for minimum degree k and k-connectivity
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Largest connected component
    Giant {
        #[command(flatten)]
        graph: GraphArg,
        /// Write the original label of each kept vertex to PATH, one per line
        #[arg(long, value_name = "PATH")]
        labels: Option<PathBuf>,
    },
    /// k-core by repeated removal of low-degree vertices
    Kcore {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        k: usize,
        /// Write the original label of each kept vertex to PATH, one per line
        #[arg(long, value_name = "PATH")]
        labels: Option<PathBuf>,
    },
    /// Tiny and atypical vertices
    Classify {
        #[command(flatten)]
        graph: GraphArg,
        /// Edge probability; defaults to the graph's edge density
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        delta: f64,
    },
    /// Structural audits of a coupled pair
    Audit {
        /// The sparser graph, whose degrees define the vertex classes
        #[arg(long, value_name = "FILE")]
        graph_minus: PathBuf,
        /// The denser graph, on which neighbourhoods are audited
        #[arg(long, value_name = "FILE")]
        graph_plus: PathBuf,
        /// Edge probability of the sparser graph
        #[arg(long)]
        p: f64,
        /// Edge probability of the denser graph; defaults to its edge density
        #[arg(long)]
        p1: Option<f64>,
        #[arg(long)]
        delta: f64,
        /// Limit on atypical neighbours per vertex
        #[arg(long, default_value_t = 30)]
        l: usize,
        /// Edge-density constant
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 200)]
        subset_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for an edge set whose removal destroys connectivity
    #[command(subcommand)]
    Attack(AttackKind),
    /// Resilience threshold: the smallest budget fraction admitting an attack
    Threshold {
        #[command(flatten)]
        graph: GraphArg,
        /// Use seeded local search (an upper bound) instead of enumeration
        #[arg(long)]
        local_search: bool,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a Monte Carlo study
    Study(StudyArgs),
    /// Replay a cut against a graph and budget
    VerifyCut {
        #[command(flatten)]
        graph: GraphArg,
        /// Cut as JSON with keys S, A, B (attack output is accepted)
        #[arg(long, value_name = "FILE")]
        cut: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Connectivity level the cut claims to destroy
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Args)]
struct GraphArg {
    /// Edge-list file: header "n m", then one "u v" line per edge with u < v
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
}

#[derive(Args)]
struct BudgetArgs {
    /// Budget fraction as p/q
    #[arg(long)]
    alpha: String,
    /// Also require every vertex to keep at least this degree
    #[arg(long, value_name = "K")]
    keep_degree: Option<usize>,
}

impl BudgetArgs {
    fn rule(&self) -> Result<BudgetRule, CliError> {
        let alpha = parse_alpha(&self.alpha)?;
        Ok(match self.keep_degree {
            Some(k) => BudgetRule::keep_degree(alpha, k),
            None => BudgetRule::fraction(alpha),
        })
    }
}

#[derive(Subcommand)]
enum SampleKind {
    /// A random graph process; prints its descriptor, or the graph after m edges
    Process {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Uniform graph with exactly m edges
    Gnm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Each edge independently with probability p
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
    },
    /// Coupled pair: G- with probability p0, G+ adding an independent layer of p'
    Coupled {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        p_prime: f64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum AttackKind {
    /// Cut off a degree-3 vertex carrying two pendant vertices
    Cherry {
        #[command(flatten)]
        graph: GraphArg,
        /// Budget fraction to check the cherry edge against
        #[arg(long, default_value = "1/3")]
        alpha: String,
    },
    /// Seeded greedy bipartition with every crossing ratio near one half
    Greedy {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        /// Edge probability for the vertex classes; defaults to the edge density
        #[arg(long)]
        p: Option<f64>,
        /// Crossing-degree threshold for re-placement; defaults to (1/2 + delta) n p
        #[arg(long)]
        d_threshold: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive search over bipartitions
    Exact {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exhaustive search over separators and bipartitions for k-connectivity
    Kconn {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StudyKind {
    Hitting,
    Sweep,
    Kcore,
    Audit,
}

impl From<StudyKind> for Study {
    fn from(s: StudyKind) -> Self {
        match s {
            StudyKind::Hitting => Study::Hitting,
            StudyKind::Sweep => Study::Sweep,
            StudyKind::Kcore => Study::Kcore,
            StudyKind::Audit => Study::Audit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct StudyArgs {
    study: StudyKind,
    /// TOML config; flags below override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Comma-separated vertex counts
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Comma-separated edge counts
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    /// Comma-separated edge counts in units of n ln n / 6
    #[arg(long, value_delimiter = ',')]
    m_scale: Vec<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed, decimal or 0x hex; overrides RESILIENCE_SEED and the config
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Budget fraction p/q for exact k-connectivity attacks
    #[arg(long)]
    alpha: Option<String>,
    /// Worker threads (0 = all cores); never changes the results
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Add a generation timestamp to JSON output
    #[arg(long)]
    timestamp: bool,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Whether the command's answer was positive (exit 0) or negative (exit 1).
type Verdict = bool;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn output(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn output_json<T: Serialize>(cli: &Cli, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    output(cli, &text)
}

fn load(arg: &GraphArg) -> Result<Graph, CliError> {
    Ok(read_graph(&arg.graph)?)
}

fn density(g: &Graph) -> f64 {
    let pairs = pair_count(g.n());
    if pairs == 0 {
        0.0
    } else {
        g.edge_count() as f64 / pairs as f64
    }
}

fn write_labels(path: &Path, sub: &Subgraph) -> Result<(), CliError> {
    let text: String = sub.original.iter().map(|v| format!("{v}\n")).collect();
    fs::write(path, text)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Verdict, CliError> {
    match &cli.command {
        Command::Sample(kind) => sample(cli, kind),
        Command::HittingTimes { n, seed, k } => {
            let trace = sample_process(*n, *seed)?;
            #[derive(Serialize)]
            struct Times {
                n: usize,
                seed: u64,
                k: usize,
                tau_1: usize,
                tau_conn: usize,
                tau_k: usize,
                tau_k_conn: usize,
            }
            output_json(
                cli,
                &Times {
                    n: *n,
                    seed: *seed,
                    k: *k,
                    tau_1: hitting_time_min_degree(&trace, 1)?,
                    tau_conn: hitting_time_k_connectivity(&trace, 1)?,
                    tau_k: hitting_time_min_degree(&trace, *k)?,
                    tau_k_conn: hitting_time_k_connectivity(&trace, *k)?,
                },
            )?;
            Ok(true)
        }
        Command::Giant { graph, labels } => {
            let g = load(graph)?;
            let giant = giant_component(&g)?;
            if let Some(path) = labels {
                write_labels(path, &giant)?;
            }
            output(cli, &write_graph(&giant.graph))?;
            Ok(true)
        }
        Command::Kcore { graph, k, labels } => {
            let g = load(graph)?;
            let core = k_core(&g, *k);
            if let Some(path) = labels {
                write_labels(path, &core)?;
            }
            output(cli, &write_graph(&core.graph))?;
            Ok(core.graph.n() > 0)
        }
        Command::Classify { graph, p, delta } => {
            let g = load(graph)?;
            let p = p.unwrap_or_else(|| density(&g));
            let cls = classify_vertices(&g, p, *delta, None)?;
            let (upper, lower) = chernoff_tail_bounds(g.n(), p, *delta)?;
            #[derive(Serialize)]
            struct Classes {
                n: usize,
                p: f64,
                delta: f64,
                tiny: Vec<usize>,
                atyp: Vec<usize>,
                chernoff_upper: f64,
                chernoff_lower: f64,
            }
            output_json(
                cli,
                &Classes {
                    n: g.n(),
                    p,
                    delta: *delta,
                    tiny: cls.tiny.to_vec(),
                    atyp: cls.atyp.to_vec(),
                    chernoff_upper: upper,
                    chernoff_lower: lower,
                },
            )?;
            Ok(true)
        }
        Command::Audit {
            graph_minus,
            graph_plus,
            p,
            p1,
            delta,
            l,
            c,
            subset_trials,
            seed,
        } => {
            let minus = read_graph(graph_minus)?;
            let plus = read_graph(graph_plus)?;
            let cls = classify_vertices(&minus, *p, *delta, None)?;
            let p1 = p1.unwrap_or_else(|| density(&plus));
            let mut reports = vec![audit_edge_counts(&plus, p1, *c, *subset_trials, *seed)?];
            reports.extend(audit_neighbourhoods(&plus, &cls, *l)?);
            reports.push(audit_atyp_size(&cls)?);
            output_json(cli, &reports)?;
            Ok(reports.iter().all(|r| r.holds))
        }
        Command::Attack(kind) => attack(cli, kind),
        Command::Threshold {
            graph,
            local_search,
            restarts,
            seed,
        } => {
            let g = load(graph)?;
            let mode = local_search.then_some(LocalSearch {
                restarts: *restarts,
                seed: *seed,
            });
            output_json(cli, &connectivity_resilience_threshold(&g, mode)?)?;
            Ok(true)
        }
        Command::Study(args) => study(cli, args),
        Command::VerifyCut { graph, cut, budget, k } => {
            let g = load(graph)?;
            let cut: Cut = serde_json::from_str(&fs::read_to_string(cut)?)
                .map_err(|e| CliError::Usage(format!("cut file: {e}")))?;
            let ok = verify_certificate(&g, &cut, &budget.rule()?, None, *k)?;
            output(cli, if ok { "certified\n" } else { "not certified\n" })?;
            Ok(ok)
        }
    }
}

fn sample(cli: &Cli, kind: &SampleKind) -> Result<Verdict, CliError> {
    match *kind {
        SampleKind::Process { n, seed, m } => {
            let trace = sample_process(n, seed)?;
            match m {
                Some(m) => output(cli, &write_graph(&graph_at(&trace, m)?))?,
                None => output_json(cli, &trace.descriptor())?,
            }
        }
        SampleKind::Gnm { n, m, seed } => output(cli, &write_graph(&sample_gnm(n, m, seed)?))?,
        SampleKind::Gnp { n, p, seed } => output(cli, &write_graph(&sample_gnp(n, p, seed)?))?,
        SampleKind::Coupled { n, p0, p_prime, seed } => {
            let s = sample_coupled(n, p0, p_prime, seed)?;
            #[derive(Serialize)]
            struct Pair {
                n: usize,
                p0: f64,
                p_prime: f64,
                p1: f64,
                g_minus: Vec<[usize; 2]>,
                g_plus: Vec<[usize; 2]>,
            }
            let edges = |g: &Graph| g.edges().map(|(u, v)| [u, v]).collect();
            output_json(
                cli,
                &Pair {
                    n,
                    p0: s.p0,
                    p_prime: s.p_prime,
                    p1: s.p1,
                    g_minus: edges(&s.g_minus),
                    g_plus: edges(&s.g_plus),
                },
            )?;
        }
    }
    Ok(true)
}

fn attack(cli: &Cli, kind: &AttackKind) -> Result<Verdict, CliError> {
    match kind {
        AttackKind::Cherry { graph, alpha } => {
            let g = load(graph)?;
            let rule = BudgetRule::fraction(parse_alpha(alpha)?);
            match cherry_attack(&g) {
                Some(cherry) => {
                    let allowed = budget_allows(&g, &[cherry.edge()], &rule, None)?;
                    output_json(cli, &AttackOutcome::new(&g, cherry.cut(g.n()), allowed))?;
                    Ok(true)
                }
                None => {
                    output(cli, "no cherry\n")?;
                    Ok(false)
                }
            }
        }
        AttackKind::Greedy {
            graph,
            epsilon,
            delta,
            p,
            d_threshold,
            seed,
        } => {
            let g = load(graph)?;
            let p = p.unwrap_or_else(|| density(&g));
            let cls = classify_vertices(&g, p, *delta, None)?;
            let d = d_threshold.unwrap_or((0.5 + delta) * g.n() as f64 * p);
            let res = greedy_partition_attack(&g, &cls, d, *epsilon, *seed)?;
            eprintln!("{}", serde_json::to_string(&res.diagnostics)?);
            output_json(cli, &res.outcome)?;
            Ok(res.outcome.satisfied)
        }
        AttackKind::Exact { graph, budget } => {
            let g = load(graph)?;
            let rule = budget.rule()?;
            report_cut(cli, &g, find_disconnecting_attack(&g, &rule, None)?)
        }
        AttackKind::Kconn { graph, budget, k } => {
            let g = load(graph)?;
            let rule = budget.rule()?;
            report_cut(cli, &g, find_k_conn_attack(&g, &rule, None, *k)?)
        }
    }
}

fn report_cut(cli: &Cli, g: &Graph, cut: Option<Cut>) -> Result<Verdict, CliError> {
    match cut {
        Some(cut) => {
            output_json(cli, &AttackOutcome::new(g, cut, true))?;
            Ok(true)
        }
        None => {
            output(cli, "resilient\n")?;
            Ok(false)
        }
    }
}

fn study(cli: &Cli, args: &StudyArgs) -> Result<Verdict, CliError> {
    let study: Study = args.study.into();
    let mut cfg = match &args.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path)?;
            if cfg.study != study {
                return Err(CliError::Usage(format!(
                    "config file is for the {} study",
                    cfg.study.name()
                )));
            }
            cfg
        }
        None => {
            if args.n.is_empty() {
                return Err(CliError::Usage("--n is required without --config".into()));
            }
            ExperimentConfig::new(study, args.n.clone())
        }
    };
    cfg.apply_env()?;
    if !args.n.is_empty() {
        cfg.n = args.n.clone();
    }
    if !args.m.is_empty() {
        cfg.m = args.m.clone();
    }
    if !args.m_scale.is_empty() {
        cfg.m_scale = args.m_scale.clone();
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = &args.seed {
        cfg.seed = parse_seed(s)?;
    }
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(e) = args.epsilon {
        cfg.epsilon = e;
    }
    if let Some(d) = args.delta {
        cfg.delta = d;
    }
    if let Some(a) = &args.alpha {
        cfg.alpha = Some(a.clone());
    }
    if let Some(t) = args.threads {
        cfg.threads = Some(t);
    }

    let result = run_study(&cfg)?;
    let format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    match &cli.out {
        Some(path) => emit(&result, format, path, args.timestamp)?,
        None => {
            if let Some(path) = &cfg.output_json {
                emit(&result, Format::Json, path, args.timestamp)?;
            }
            if let Some(path) = &cfg.output_csv {
                emit(&result, Format::Csv, path, args.timestamp)?;
            }
            if cfg.output_json.is_none() && cfg.output_csv.is_none() {
                match format {
                    Format::Json => {
                        let doc = StudyDocument::new(&result, args.timestamp);
                        output(cli, &doc.to_json()?)?;
                    }
                    Format::Csv => {
                        let mut buf = Vec::new();
                        write_records_csv(&mut buf, &result.records)?;
                        std::io::stdout().write_all(&buf)?;
                    }
                }
            }
        }
    }
    Ok(true)
}
