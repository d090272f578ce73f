//! Batch front end: generate instances, derive parameters, verify.
//!
//! Exit codes: 0 success, 1 an asserted condition failed, 2 usage or
//! validation error, 3 strict mode refused to run.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypercontainers::instances::{gen_ap, gen_random, read_edge_list_file, write_edge_list, write_edge_list_file};
use hypercontainers::report::refusal_report;
use hypercontainers::verifier::{DEFAULT_ENUM_CAP, DEFAULT_SAMPLES};
use hypercontainers::oracle::DEFAULT_EXACT_CAP;
use hypercontainers::{
    enumerate_independent_sets, sample_independent_sets, verify, Coverage, Engine, EngineConfig,
    Error, Execution, Hypergraph, Mode, Params,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Parser)]
#[command(name = "hypercontainers", version, about = "Deterministic hypergraph containers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write it as an edge-list file.
    Gen(GenArgs),
    /// Print the derived constants and hypothesis flags.
    Params(ParamsArgs),
    /// Run the construction on an edge-list file and verify it.
    Verify(VerifyArgs),
    /// Build the k-AP hypergraph on {0, .., n-1} and verify it.
    DemoAp(DemoApArgs),
}

#[derive(Args)]
struct GenArgs {
    /// k-term arithmetic progressions in {0, .., n-1}
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    ap: bool,
    /// random k-sets trimmed to a delta-bounded hypergraph
    #[arg(long)]
    random: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: usize,
    /// boundedness target (random only)
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// homogeneity slack recorded for the instance (random only)
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// output file; standard output when absent
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    pi: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Permissive,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    pi: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Permissive)]
    mode: ModeArg,
    /// independent sets to sample when n exceeds the enumeration cap
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// enumerate all independent sets when n is at most this
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: usize,
    /// largest component the exact bounded-subhypergraph search accepts
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    oracle_cap: usize,
    /// report file; standard output when absent
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// worker threads (0 uses every core, 1 runs sequentially)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct DemoApArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[command(flatten)]
    run: RunArgs,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e)
    }
}

type CmdResult = Result<u8, Failure>;

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> CmdResult {
    let h = if args.ap {
        // uniformity is checked before the vertex count so `--ap --k 2` names the real problem
        if args.k < 3 {
            return Err(Error::ApUniformity { k: args.k }.into());
        }
        let n = args.n.ok_or_else(|| Failure::usage("--n is required"))?;
        gen_ap(n, args.k)?
    } else {
        let n = args.n.ok_or_else(|| Failure::usage("--n is required"))?;
        gen_random(n, args.k, args.delta, args.eps, args.seed)?.hypergraph
    };
    match &args.output {
        Some(path) => write_edge_list_file(&h, path)?,
        None => write_edge_list(&h, std::io::stdout().lock())?,
    }
    Ok(0)
}

fn cmd_params(args: ParamsArgs) -> CmdResult {
    let p = Params::derive(args.k, args.pi, args.eps, args.n)?;
    for (key, value) in p.to_lines() {
        println!("{key} = {value}");
    }
    Ok(0)
}

fn execution(jobs: usize) -> Execution {
    if jobs == 1 || !cfg!(feature = "parallel") {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn run_verification(h: Hypergraph, run: &RunArgs, announce_bound: bool) -> CmdResult {
    let params = Params::derive(h.k(), run.pi, run.eps, h.n())?;
    let mode = match run.mode {
        ModeArg::Strict => Mode::Strict,
        ModeArg::Permissive => Mode::Permissive,
    };
    let config = EngineConfig {
        mode,
        exact_cap: run.oracle_cap,
        ..EngineConfig::default()
    };
    let refuse = |reason: String| -> CmdResult {
        eprintln!("refused: {reason}");
        emit(&refusal_report(&h, &params, mode, &reason), run.output.as_ref())?;
        Ok(EXIT_REFUSED)
    };
    let engine = match Engine::new(h.clone(), params, config) {
        Ok(e) => e,
        Err(Error::HypothesisFailed(reason)) => return refuse(reason),
        Err(e) => return Err(e.into()),
    };
    let exec = execution(run.jobs);
    let (sets, coverage) = if h.n() <= run.enum_cap {
        (enumerate_independent_sets(&h, run.enum_cap)?, Coverage::Enumeration)
    } else {
        (sample_independent_sets(&h, run.samples, run.seed, exec), Coverage::Sample)
    };
    let report = match verify(&engine, &sets, coverage, exec) {
        Ok(r) => r,
        Err(e) => match e.root() {
            Error::OracleGuard { .. } if mode == Mode::Strict => return refuse(e.to_string()),
            _ => return Err(e.into()),
        },
    };
    emit(&report.to_kv_string(), run.output.as_ref())?;
    if announce_bound {
        if let Some((lhs, rhs)) = report.counting_bound {
            eprintln!("independent sets: {lhs}; container bound: {rhs}");
        }
    }
    Ok(if report.all_asserted_pass() { 0 } else { EXIT_FAIL })
}

fn with_jobs(jobs: usize, f: impl FnOnce() -> CmdResult + Send) -> CmdResult {
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
        return pool.install(f);
    }
    let _ = jobs;
    f()
}

fn validate(run: &RunArgs) -> Result<(), Failure> {
    if run.enum_cap == 0 || run.oracle_cap == 0 || run.samples == 0 {
        return Err(Failure::usage("caps and sample count must be positive"));
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    validate(&args.run)?;
    let h = read_edge_list_file(&args.input)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.input.display())))?;
    with_jobs(args.run.jobs, || run_verification(h, &args.run, false))
}

fn cmd_demo_ap(args: DemoApArgs) -> CmdResult {
    validate(&args.run)?;
    let h = gen_ap(args.n, args.k)?;
    with_jobs(args.run.jobs, || run_verification(h, &args.run, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Params(a) => cmd_params(a),
        Command::Verify(a) => cmd_verify(a),
        Command::DemoAp(a) => cmd_demo_ap(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
