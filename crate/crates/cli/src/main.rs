//! `covert`: generators, covert set cover runs, network discovery and the
//! sampling experiment, with JSON or CSV output.

mod output;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use covert_core::epsilon_net::{run_weighted_epsilon_net, EpsNetConfig};
use covert_core::harness::{
    gen_graph, gen_set_system, lemma_5_1_test, run_benchmark, run_experiment, Algorithm,
    BenchConfig, ExperimentConfig, GraphModel, InstanceSource, SetModel,
};
use covert_core::netdiscovery::{
    competitive_ratio, offline_verification, run_network_discovery, Graph, GraphFile,
    VerificationMode, EXACT_VERIFICATION_CAP,
};
use covert_core::oracle::CovertOracle;
use covert_core::pseudo_greedy::{run_pseudo_greedy, DEFAULT_ALPHA};
use covert_core::setsystem::{SetSystem, SetSystemFile};

use output::{Format, Output};

#[derive(Parser)]
#[command(
    name = "covert",
    version,
    about = "Set cover and network discovery under covert queries"
)]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file.
    GenGraph(GenGraphArgs),
    /// Generate a set-system file.
    GenSets(GenSetsArgs),
    /// Run a set cover algorithm over seeded trials.
    Setcover(SetcoverArgs),
    /// Discover a graph with layered queries.
    Discover(DiscoverArgs),
    /// Compute an offline verification set for a known graph.
    Verify(VerifyArgs),
    /// Threshold-crossing rates of the round sampler.
    LemmaTest(LemmaArgs),
    /// Query counts of the covert algorithms against planted cover size.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Path,
    Cycle,
    Complete,
    Star,
    ErConnected,
    Grid,
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long, value_enum)]
    model: GraphKind,
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Edge probability for er-connected.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, default_value_t = 2)]
    rows: usize,
    #[arg(long, default_value_t = 2)]
    cols: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GenGraphArgs {
    fn model(&self) -> GraphModel {
        let n = self.n;
        match self.model {
            GraphKind::Path => GraphModel::Path { n },
            GraphKind::Cycle => GraphModel::Cycle { n },
            GraphKind::Complete => GraphModel::Complete { n },
            GraphKind::Star => GraphModel::Star { n },
            GraphKind::ErConnected => GraphModel::ErConnected { n, p: self.p },
            GraphKind::Grid => GraphModel::Grid {
                rows: self.rows,
                cols: self.cols,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SetKind {
    UniformRandom,
    PlantedCover,
    Skewed,
}

#[derive(Args, Clone)]
struct SetModelArgs {
    #[arg(long, value_enum, default_value_t = SetKind::PlantedCover)]
    model: SetKind,
    /// Universe size.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Number of sets.
    #[arg(long, default_value_t = 16)]
    m: usize,
    /// Planted cover size.
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0.1)]
    density: f64,
}

impl SetModelArgs {
    fn model(&self) -> SetModel {
        let (n, m) = (self.n, self.m);
        match self.model {
            SetKind::UniformRandom => SetModel::UniformRandom {
                n,
                m,
                density: self.density,
            },
            SetKind::PlantedCover => SetModel::PlantedCover {
                n,
                m,
                k: self.k,
                density: self.density,
            },
            SetKind::Skewed => SetModel::Skewed { n, m },
        }
    }
}

#[derive(Args)]
struct GenSetsArgs {
    #[command(flatten)]
    model: SetModelArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SetcoverArgs {
    #[arg(long, value_enum, default_value_t = CoverAlgo::PseudoGreedy)]
    algo: CoverAlgo,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// First seed; trial `t` uses `seed + t`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Set-system file; when absent an instance is generated per trial.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    model: SetModelArgs,
    /// Write every oracle query of a single covert trial as JSON lines.
    #[arg(long)]
    query_log: Option<PathBuf>,
    /// Keep learnt set contents across ε-net iterations.
    #[arg(long)]
    cache_contents: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CoverAlgo {
    PseudoGreedy,
    Epsnet,
    Greedy,
    Bruteforce,
}

impl From<CoverAlgo> for Algorithm {
    fn from(a: CoverAlgo) -> Self {
        match a {
            CoverAlgo::PseudoGreedy => Algorithm::PseudoGreedy,
            CoverAlgo::Epsnet => Algorithm::Epsnet,
            CoverAlgo::Greedy => Algorithm::Greedy,
            CoverAlgo::Bruteforce => Algorithm::Bruteforce,
        }
    }
}

#[derive(Args)]
struct DiscoverArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = VerifyMode::Exact)]
    mode: VerifyMode,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    Exact,
    Greedy,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// The scale `N`.
    #[arg(long, default_value_t = 1_048_576.0)]
    scale: f64,
    #[arg(long, default_value_t = 1024.0)]
    s_i: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 512)]
    m: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    ks: Vec<usize>,
    #[arg(long, default_value_t = 0.01)]
    density: f64,
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    let file: GraphFile = read_json(path)?;
    Ok(Graph::from_file(&file)?)
}

fn run(cli: Cli) -> Result<()> {
    let out = Output::new(cli.out.clone(), cli.format);
    match cli.command {
        Command::GenGraph(args) => {
            let graph = gen_graph(args.model(), args.seed)?;
            out.graph(&graph.to_file())
        }
        Command::GenSets(args) => {
            let generated = gen_set_system(args.model.model(), args.seed)?;
            out.set_system(&output::GeneratedFile {
                file: generated.system.to_file(),
                planted: generated.planted,
                coverable: generated.coverable,
            })
        }
        Command::Setcover(args) => setcover(args, &out),
        Command::Discover(args) => {
            let graph = load_graph(&args.graph)?;
            let mut result = run_network_discovery(&graph, args.alpha, args.seed)?;
            if graph.n() <= EXACT_VERIFICATION_CAP {
                let opt = offline_verification(&graph, VerificationMode::Exact)?.size;
                if opt > 0 {
                    result.competitive_ratio = Some(competitive_ratio(&result, opt));
                }
            }
            out.discovery(&result)
        }
        Command::Verify(args) => {
            let graph = load_graph(&args.graph)?;
            let mode = match args.mode {
                VerifyMode::Exact => VerificationMode::Exact,
                VerifyMode::Greedy => VerificationMode::Greedy,
            };
            out.verification(&offline_verification(&graph, mode)?)
        }
        Command::LemmaTest(args) => out.lemma(&lemma_5_1_test(
            args.alpha,
            args.scale,
            args.s_i,
            args.trials,
            args.seed,
        )),
        Command::Bench(args) => {
            let report = run_benchmark(&BenchConfig {
                n: args.n,
                m: args.m,
                ks: args.ks,
                density: args.density,
                seeds: (0..args.seeds).collect(),
                alpha: args.alpha,
                epsnet: EpsNetConfig::default(),
            })?;
            out.bench(&report)
        }
    }
}

fn setcover(args: SetcoverArgs, out: &Output) -> Result<()> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let source = match &args.input {
        Some(path) => {
            let file: SetSystemFile = read_json(path)?;
            InstanceSource::Sets(SetSystem::from_file(file)?)
        }
        None => InstanceSource::SetModel(args.model.model()),
    };
    let seeds: Vec<u64> = (args.seed..args.seed + args.trials).collect();
    let mut config = ExperimentConfig::new(args.algo.into(), source.clone(), seeds);
    config.alpha = args.alpha;
    config.epsnet.cache_contents = args.cache_contents;
    let report = run_experiment(&config)?;

    if let Some(path) = &args.query_log {
        if args.trials != 1 {
            bail!("--query-log needs --trials 1");
        }
        let sys = match source {
            InstanceSource::Sets(sys) => sys,
            InstanceSource::SetModel(model) => gen_set_system(model, args.seed)?.system,
            _ => unreachable!("set sources only"),
        };
        let mut oracle = CovertOracle::new(sys).with_query_log();
        match args.algo {
            CoverAlgo::PseudoGreedy => {
                run_pseudo_greedy(&mut oracle, args.alpha, args.seed)?;
            }
            CoverAlgo::Epsnet => {
                run_weighted_epsilon_net(&mut oracle, &config.epsnet, args.seed)?;
            }
            CoverAlgo::Greedy | CoverAlgo::Bruteforce => {
                bail!("--query-log applies to pseudo-greedy and epsnet only")
            }
        }
        let file =
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut writer = BufWriter::new(file);
        oracle.write_query_log(&mut writer)?;
        writer.flush()?;
    }
    out.report(&report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let chain: Vec<String> = err.chain().map(ToString::to_string).collect();
            let body = serde_json::json!({ "error": err.to_string(), "causes": chain });
            eprintln!("{body}");
            ExitCode::FAILURE
        }
    }
}
