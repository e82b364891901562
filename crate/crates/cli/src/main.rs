use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use prodvc::classes::classify;
use prodvc::density::{arboricity, bounded_outdegree_orientation, densest_subgraph, forest_decomposition, nash_williams_ratio};
use prodvc::graph::{degeneracy, parse_edge_list};
use prodvc::harness::{fuzz_conjecture3, generate, Family, GeneratorSpec, Suite, SuiteConfig, VerificationReport};
use prodvc::labeling::{self, LabelScheme};
use prodvc::product::InstanceFile;
use prodvc::reduction::{reduce, reduce_octahedron};
use prodvc::vc::{self, VcOptions};
use prodvc::{rational, Error, Graph, ProductSubgraph, Rational};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "prodvc", version, about = "Density and VC-dimension of subgraphs of Cartesian products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact density, mad and a densest subgraph.
    Density { file: PathBuf },
    /// Arboricity with the Nash-Williams witness set.
    Arboricity { file: PathBuf },
    /// Orientation with every outdegree at most d.
    Orient {
        #[arg(long = "max-outdegree", value_name = "D")]
        max_outdegree: usize,
        file: PathBuf,
    },
    /// VC-dimension and VC-density of a product subgraph.
    Vcd(VcdArgs),
    /// One contraction (or octahedral identification) step.
    Reduce {
        instance: PathBuf,
        #[arg(long)]
        factor: usize,
        #[arg(long, value_name = "U,V", conflicts_with = "octahedron", required_unless_present = "octahedron")]
        edge: Option<String>,
        #[arg(long, value_name = "E")]
        octahedron: Option<usize>,
    },
    /// Chordality, dismantlability, suboctahedron test, dd, clique number.
    Classify { file: PathBuf },
    /// Adjacency labels from a forest decomposition.
    #[command(subcommand)]
    Label(LabelCommand),
    /// Runs a verification suite and writes the report.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
        /// Average-degree bound for minor-free factors, e.g. 4 or 9/2.
        #[arg(long, value_parser = parse_rational)]
        mu: Option<Rational>,
    },
    /// Compares |E|/|V| with vcdens* on generated instances; trial t uses
    /// generator seed `seed + t`.
    #[command(name = "fuzz-conj3")]
    FuzzConj3 {
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Writes a generated instance as JSON.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        /// Keep each edge of the induced subgraph with probability 0.7.
        #[arg(long)]
        non_induced: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VcdArgs {
    instance: PathBuf,
    /// Also compute vcd* and vcdens*.
    #[arg(long)]
    minor: bool,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long = "exact-caps", num_args = 2, value_names = ["F_MAX", "M_MAX"])]
    exact_caps: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum LabelCommand {
    /// Label file for a factor or instance graph.
    Encode {
        file: PathBuf,
        /// Number of forests; the degeneracy when omitted.
        #[arg(long)]
        forests: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether vertices x and y of a label file are adjacent.
    Decode { labels: PathBuf, x: usize, y: usize },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Record per-trial runtimes (reports then differ between runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "path", value_parser = parse_family)]
    family: Family,
    /// Factor sizes, one for all factors or one per factor.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Fraction of product vertices kept.
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    #[arg(long)]
    max_vertices: Option<usize>,
}

impl GenArgs {
    fn spec(&self, seed: u64) -> GeneratorSpec {
        let mut spec = GeneratorSpec::new(self.family, self.sizes.clone(), self.m, seed);
        spec.vertex_fraction = self.fraction;
        if let Some(k) = self.max_vertices {
            spec.max_vertices = k;
        }
        spec
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).filter(|r| *r >= Rational::from_integer(0)).ok_or_else(|| format!("not a nonnegative rational: {s:?}"))
}

/// A run that did not succeed: a violated claim or an infeasible request
/// exits with 1, anything else with 2.
enum Failure {
    Violation(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { .. } | Error::InsufficientClasses { .. } => Failure::Violation(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => match writeln!(io::stdout().lock(), "{}", text.trim_end()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Input(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn print_json(v: &Value) -> Outcome {
    emit(&serde_json::to_string_pretty(v).expect("json value"), None)
}

fn load_instance(path: &Path) -> Result<ProductSubgraph, Failure> {
    Ok(InstanceFile::parse(&read(path)?)?.to_subgraph()?)
}

/// An edge-list file, or the graph of a JSON instance.
fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        Ok(InstanceFile::parse(&text)?.to_subgraph()?.graph())
    } else {
        Ok(parse_edge_list(&text)?)
    }
}

fn exact(r: &Rational) -> Value {
    json!(rational::format(r))
}

fn approx(r: &Rational) -> Value {
    json!(rational::to_f64(r))
}

fn density_cmd(file: &Path) -> Outcome {
    let g = load_graph(file)?;
    let d = densest_subgraph(&g)?;
    print_json(&json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "density": exact(&d.density),
        "density_approx": approx(&d.density),
        "mad": exact(&d.mad),
        "mad_approx": approx(&d.mad),
        "witness": d.witness,
    }))
}

fn arboricity_cmd(file: &Path) -> Outcome {
    let g = load_graph(file)?;
    let (ratio, witness) = match nash_williams_ratio(&g) {
        Some((r, w)) => (Some(r), w),
        None => (None, Vec::new()),
    };
    let k = degeneracy(&g);
    let fd = forest_decomposition(&g, k)?;
    let forests: Vec<Vec<(usize, usize)>> = (0..k).map(|c| fd.forest(c).collect()).collect();
    print_json(&json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "arboricity": arboricity(&g),
        "nash_williams_ratio": ratio.as_ref().map(exact),
        "nash_williams_ratio_approx": ratio.as_ref().map(approx),
        "witness": witness,
        "degeneracy": k,
        "forests": forests,
    }))
}

fn orient_cmd(file: &Path, d: usize) -> Outcome {
    let g = load_graph(file)?;
    let o = bounded_outdegree_orientation(&g, d)?;
    print_json(&json!({
        "max_outdegree": o.max_outdegree,
        "outdegrees": o.outdegrees(g.vertex_count()),
        "arcs": o.arcs,
    }))
}

fn vcd_cmd(a: &VcdArgs) -> Outcome {
    let g = load_instance(&a.instance)?;
    let mut opts = VcOptions { seed: a.seed, ..VcOptions::default() };
    if let Some(b) = a.budget {
        opts.budget = b;
    }
    if let Some(caps) = &a.exact_caps {
        opts.f_max = caps[0];
        opts.m_max = caps[1];
    }
    let value = if a.minor {
        serde_json::to_value(vc::vc_report(&g, &opts)?).expect("report serializes")
    } else {
        json!({
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "vcd": vc::vcd_induced(&g)?,
            "vcdens": vc::vcdens_induced(&g, &opts)?,
        })
    };
    print_json(&value)
}

fn parse_edge(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Input(format!("--edge expects U,V, got {s:?}"));
    let (u, v) = s.split_once(',').ok_or_else(bad)?;
    Ok((u.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?))
}

fn reduce_cmd(instance: &Path, factor: usize, edge: Option<&str>, octahedron: Option<usize>) -> Outcome {
    let g = load_instance(instance)?;
    if factor >= g.space().dimension() {
        return Err(Failure::Input(format!("no factor {factor}")));
    }
    let step = match (edge, octahedron) {
        (_, Some(e)) => reduce_octahedron(&g, factor, e)?,
        (Some(uv), None) => {
            let (u, v) = parse_edge(uv)?;
            reduce(&g, factor, u, v)?
        }
        (None, None) => return Err(Failure::Input("one of --edge or --octahedron is required".into())),
    };
    print_json(&step.to_json())
}

fn classify_cmd(file: &Path) -> Outcome {
    let g = load_graph(file)?;
    print_json(&serde_json::to_value(classify(&g)).expect("classification serializes"))
}

fn label_cmd(cmd: &LabelCommand) -> Outcome {
    match cmd {
        LabelCommand::Encode { file, forests, out } => {
            let g = load_graph(file)?;
            let k = forests.unwrap_or_else(|| degeneracy(&g));
            let scheme = labeling::encode(&g, &forest_decomposition(&g, k)?)?;
            emit(&scheme.to_text(), out.as_deref())
        }
        LabelCommand::Decode { labels, x, y } => {
            let scheme = LabelScheme::parse(&read(labels)?)?;
            for v in [x, y] {
                if *v >= scheme.n {
                    return Err(Failure::Input(format!("vertex {v} out of range for {} labels", scheme.n)));
                }
            }
            emit(&scheme.adjacent(*x, *y)?.to_string(), None)
        }
    }
}

fn config(suite: Suite, run: &RunArgs, mu: Option<Rational>) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(suite, run.trials, run.seed);
    cfg.mu = mu;
    cfg.threads = run.threads;
    cfg.timings = run.timings;
    cfg
}

fn finish(report: &VerificationReport, out: Option<&Path>) -> Outcome {
    let s = &report.summary;
    for (claim, c) in &s.claims {
        let tag = if c.proved { "" } else { " (unproved)" };
        eprintln!("{claim:<24} holds {:>6}  violated {:>5}  inconclusive {:>5}{tag}", c.holds, c.violated, c.inconclusive);
    }
    eprintln!("{} records, {} failures, {} archived instances", s.records, s.failures, report.archive.len());
    emit(&report.to_json(), out)?;
    if report.passed() {
        Ok(())
    } else {
        let first: Vec<String> = report.failures().take(5).map(|r| format!("{} on {}", r.claim, r.digest)).collect();
        Err(Failure::Violation(format!("{} proved claims violated: {}", s.failures, first.join(", "))))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Density { file } => density_cmd(&file),
        Command::Arboricity { file } => arboricity_cmd(&file),
        Command::Orient { max_outdegree, file } => orient_cmd(&file, max_outdegree),
        Command::Vcd(a) => vcd_cmd(&a),
        Command::Reduce { instance, factor, edge, octahedron } => reduce_cmd(&instance, factor, edge.as_deref(), octahedron),
        Command::Classify { file } => classify_cmd(&file),
        Command::Label(cmd) => label_cmd(&cmd),
        Command::Verify { suite, run, mu } => {
            let report = prodvc::harness::run_suite(&config(suite, &run, mu))?;
            finish(&report, run.out.as_deref())
        }
        Command::FuzzConj3 { gen, run } => {
            let report = fuzz_conjecture3(&gen.spec(run.seed), run.trials, &config(Suite::Conj3, &run, None))?;
            finish(&report, run.out.as_deref())
        }
        Command::Generate { gen, non_induced, seed, out } => {
            let mut spec = gen.spec(seed);
            spec.induced = !non_induced;
            let g = generate(&spec)?;
            emit(&InstanceFile::from_subgraph(&g).to_json(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("prodvc: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("prodvc: {msg}");
            ExitCode::from(2)
        }
    }
}
