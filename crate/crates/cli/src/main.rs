use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypermatch::decision::{decide, DecideConfig, Method, Verdict};
use hypermatch::generators;
use hypermatch::reachability::run_pipeline;
use hypermatch::report::{to_json, AnalysisReport, DecisionReport, MethodOutcome};
use hypermatch::{Fraction, Hypergraph};

mod bench;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Graph(#[from] hypermatch::HypergraphError),
    #[error(transparent)]
    Pipeline(#[from] hypermatch::reachability::PipelineError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Parser)]
#[command(name = "hypermatch", version, about = "Perfect matchings in dense k-uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance in the text format.
    Generate(GenerateArgs),
    /// Decide whether an instance has a perfect matching.
    Decide {
        /// Instance file, or `-` for stdin.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Fast)]
        method: MethodArg,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Run the partition pipeline and report the resulting pair.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Time every method on a fixed suite and write CSV.
    Bench {
        #[arg(long, value_enum, default_value_t = bench::Suite::Default)]
        suite: bench::Suite,
        /// Comma-separated methods.
        #[arg(long, value_delimiter = ',', default_value = "brute,slow,fast")]
        methods: Vec<Method>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Slow,
    Fast,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Space,
    ParityEven,
    ParityOdd,
    Kkm,
    Random,
    Complete,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Barrier size for `space`.
    #[arg(long)]
    s: Option<usize>,
    /// Size of X for the parity barriers.
    #[arg(long)]
    x: Option<usize>,
    /// Codegree target for `random` (default ceil(n/k)).
    #[arg(long)]
    codegree: Option<usize>,
    #[arg(long, default_value_t = generators::DEFAULT_DENSITY)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    #[arg(long)]
    gamma: Option<Fraction>,
    #[arg(long)]
    alpha: Option<Fraction>,
    #[arg(long)]
    mu0: Option<Fraction>,
    #[arg(long)]
    t_cap: Option<usize>,
    #[arg(long)]
    validity_floor: Option<usize>,
    /// Search node budget for the oracle and the certificate search.
    #[arg(long, env = "HYPERMATCH_BUDGET")]
    budget: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Single worker, so node counts and reports are reproducible.
    #[arg(long)]
    deterministic: bool,
    /// Seed for the random instances of `bench`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certificate cover-set size (default 2k(k-2)).
    #[arg(long)]
    certificate_size: Option<usize>,
}

impl ConfigArgs {
    fn decide_config(&self) -> DecideConfig {
        let mut cfg = DecideConfig::default();
        let p = &mut cfg.pipeline;
        if let Some(g) = &self.gamma {
            p.gamma = g.clone();
        }
        if let Some(a) = &self.alpha {
            p.alpha = a.clone();
        }
        if let Some(m) = &self.mu0 {
            p.mu0 = m.clone();
        }
        if let Some(t) = self.t_cap {
            p.t_cap = t;
        }
        if let Some(f) = self.validity_floor {
            p.validity_floor = f;
        }
        if let Some(b) = self.budget {
            p.oracle.node_budget = b;
            cfg.certificate.node_budget = b;
        }
        if self.certificate_size.is_some() {
            cfg.certificate.s = self.certificate_size;
        }
        cfg
    }

    fn init_threads(&self) {
        let jobs = if self.deterministic { Some(1) } else { self.jobs };
        if let Some(j) = jobs {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
                log::warn!("could not size the worker pool: {e}");
            }
        }
    }
}

fn read_graph(path: &Path) -> Result<Hypergraph, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        s
    } else {
        fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?
    };
    Ok(Hypergraph::parse(&text)?)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn generate(a: &GenerateArgs) -> Result<Hypergraph, CliError> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this kind")))
    };
    let h = match a.kind {
        Kind::Space => generators::space_barrier(a.n, a.k, need(a.s, "s")?)?,
        Kind::ParityEven => generators::parity_barrier_even(a.n, a.k, need(a.x, "x")?)?,
        Kind::ParityOdd => generators::parity_barrier_odd(a.n, a.k, need(a.x, "x")?)?,
        Kind::Kkm => generators::kkm_construction(a.n)?,
        Kind::Complete => generators::complete(a.n, a.k)?,
        Kind::Random => {
            let target = a.codegree.unwrap_or(a.n.div_ceil(a.k.max(1)));
            generators::random_dense_with_density(a.n, a.k, target, a.density, a.seed)?
        }
    };
    Ok(h)
}

pub(crate) fn run_method(h: &Hypergraph, method: Method, cfg: &DecideConfig) -> MethodOutcome {
    match decide(h, method, cfg) {
        Ok(d) => MethodOutcome::Decided(Box::new(d)),
        Err(e) => MethodOutcome::Failed {
            method,
            verdict: Verdict::Unknown,
            error: e.to_string(),
        },
    }
}

fn exit_code(v: Verdict) -> ExitCode {
    ExitCode::from(match v {
        Verdict::Yes => 0,
        Verdict::No => 1,
        Verdict::Unknown => 2,
    })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Generate(a) => {
            let h = generate(&a)?;
            write_out(a.out.as_deref(), &h.serialize())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decide { file, method, config } => {
            config.init_threads();
            let h = read_graph(&file)?;
            let cfg = config.decide_config();
            let methods = match method {
                MethodArg::Brute => vec![Method::Brute],
                MethodArg::Slow => vec![Method::Slow],
                MethodArg::Fast => vec![Method::Fast],
                MethodArg::All => vec![Method::Brute, Method::Slow, Method::Fast],
            };
            let results: Vec<MethodOutcome> = methods.iter().map(|&m| run_method(&h, m, &cfg)).collect();
            for r in &results {
                if let MethodOutcome::Failed { method, error, .. } = r {
                    eprintln!("hypermatch: {method}: {error}");
                }
            }
            let report = DecisionReport::new(&h, &cfg, results);
            for d in &report.disagreements {
                let note = if d.tolerated { " (below validity floor)" } else { "" };
                eprintln!(
                    "hypermatch: {} says {:?}, oracle says {:?}{note}",
                    d.method, d.verdict, d.oracle
                );
            }
            write_out(None, &to_json(&report))?;
            Ok(exit_code(report.verdict))
        }
        Command::Analyze { file, config } => {
            config.init_threads();
            let h = read_graph(&file)?;
            let cfg = config.decide_config();
            let result = run_pipeline(&h, &cfg.pipeline)?;
            write_out(None, &to_json(&AnalysisReport::new(&h, result)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { suite, methods, out, config } => {
            config.init_threads();
            let cfg = config.decide_config();
            let csv = bench::run(suite, &methods, &cfg, config.seed)?;
            write_out(out.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hypermatch: {e}");
            ExitCode::from(2)
        }
    }
}
