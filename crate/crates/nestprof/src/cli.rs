use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nestprof_core::approx::Threshold;
use nestprof_core::datagen::{generate, GenSpec};
use nestprof_core::fd::DEFAULT_MAX_LHS;
use nestprof_core::json_model::{DocumentCollection, JsonValue};
use nestprof_core::unroll::static_unroll;
use nestprof_core::MineError;

use crate::bench::{format_table, run_bench, BenchConfig};
use crate::input::{parse_collection, Format};
use crate::pipeline::{run_mine, Algorithm, Kind, MineConfig, PipelineError, Unroll};
use crate::verify::{verify, Dependency};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable holding the soft memory cap in MiB.
pub const MAX_MEM_ENV: &str = "NESTPROF_MAX_MEM_MB";

#[derive(Parser, Debug)]
#[command(name = "nestprof", version, about = "Nested inclusion and functional dependency profiler for JSON")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mine dependencies from a collection.
    Mine(MineArgs),
    /// Check one dependency, e.g. `'$.a[*] < $.b'` or `'$.a, $.b -> $.c'`.
    Verify(VerifyArgs),
    /// Generate a synthetic collection as JSON Lines.
    Gen(GenArgs),
    /// Time static against dynamic unrolling on generated data.
    Bench(BenchArgs),
    /// Write the statically unrolled rows as CSV.
    Unroll(UnrollArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json-lines")]
    format: Format,
}

#[derive(Args, Debug)]
struct MineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Defaults to spider for inclusion and tane for functional dependencies.
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    #[arg(long, value_enum, default_value = "dynamic")]
    unroll: Unroll,
    /// Minimum strength, as a decimal or a fraction like `2/3`.
    #[arg(long, default_value = "0.99")]
    threshold: Threshold,
    #[arg(long, default_value_t = DEFAULT_MAX_LHS)]
    max_lhs: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Emit a final record with phase timings.
    #[arg(long)]
    timing: bool,
    /// Also emit inclusion candidates below the threshold.
    #[arg(long)]
    all: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    dependency: String,
    #[arg(long, default_value = "0.99")]
    threshold: Threshold,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// GenSpec as JSON; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    docs: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "100,1000")]
    sizes: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "spider,demarchi,tane,fdep")]
    algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 4000)]
    fd_unit_limit: usize,
}

#[derive(Args, Debug)]
struct UnrollArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn io_failure(e: io::Error) -> Failure {
    Failure::new(EXIT_INPUT, e)
}

fn load(args: &InputArgs) -> Result<DocumentCollection, Failure> {
    let file = File::open(&args.input).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", args.input.display())))?;
    parse_collection(io::BufReader::new(file), args.format)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", args.input.display())))
}

/// Writes to `--output` when given, otherwise to `out`.
fn with_output(path: &Option<PathBuf>, out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Outcome {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w).and_then(|()| w.flush()).map_err(io_failure)
        }
        None => f(out).map_err(io_failure),
    }
}

fn mem_limit() -> Result<Option<usize>, Failure> {
    match std::env::var(MAX_MEM_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|mb| Some(mb.saturating_mul(1 << 20)))
            .map_err(|_| Failure::new(EXIT_USAGE, format!("{MAX_MEM_ENV} must be a whole number of MiB"))),
        Err(_) => Ok(None),
    }
}

fn pipeline_failure(e: PipelineError) -> Failure {
    let code = match &e {
        PipelineError::MemoryLimit { .. } | PipelineError::Mine(MineError::TooManyUnits { .. }) => EXIT_RESOURCE,
        PipelineError::Mine(MineError::ZeroMaxLhs) => EXIT_USAGE,
        PipelineError::Mine(_) => EXIT_INPUT,
    };
    Failure::new(code, e)
}

fn mine(args: MineArgs, out: &mut dyn Write) -> Outcome {
    let algorithm = match (args.kind, args.algorithm) {
        (Some(k), Some(a)) if a.kind() != k => {
            return Err(Failure::new(
                EXIT_USAGE,
                format!("algorithm `{}` does not mine {:?} dependencies", a.name(), k).to_lowercase(),
            ))
        }
        (_, Some(a)) => a,
        (Some(Kind::Fd), None) => Algorithm::Tane,
        (_, None) => Algorithm::Spider,
    };
    if args.max_lhs == 0 {
        return Err(Failure::new(EXIT_USAGE, "--max-lhs must be at least 1"));
    }
    let config = MineConfig {
        unroll: args.unroll,
        threshold: args.threshold,
        max_lhs: args.max_lhs,
        threads: args.threads,
        include_unsatisfied: args.all,
        mem_limit: mem_limit()?,
        ..MineConfig::new(algorithm)
    };
    let collection = load(&args.input)?;
    let report = run_mine(&collection, &config).map_err(pipeline_failure)?;
    with_output(&args.output, out, |w| {
        for r in &report.records {
            writeln!(w, "{}", r.to_json())?;
        }
        if args.timing {
            writeln!(w, "{}", report.timing.to_json())?;
        }
        Ok(())
    })
}

fn verify_cmd(args: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let dep: Dependency = args.dependency.parse().map_err(|e| Failure::new(EXIT_USAGE, e))?;
    let collection = load(&args.input)?;
    let verdict = verify(&collection, &dep, args.threshold);
    writeln!(out, "{}", verdict.to_json()).map_err(io_failure)
}

fn read_spec(path: &Option<PathBuf>) -> Result<GenSpec, Failure> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", p.display())))
        }
        None => Ok(GenSpec::default()),
    }
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Outcome {
    let mut spec = read_spec(&args.config)?;
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(docs) = args.docs {
        spec.n_docs = docs;
    }
    let collection = generate(&spec).map_err(|e| Failure::new(EXIT_USAGE, e))?;
    with_output(&args.output, out, |w| {
        for d in collection.documents() {
            serde_json::to_writer(&mut *w, &JsonValue::Object(d.root.clone()))?;
            writeln!(w)?;
        }
        Ok(())
    })
}

fn bench(args: BenchArgs, out: &mut dyn Write) -> Outcome {
    let base = match &args.config {
        Some(_) => read_spec(&args.config)?,
        None => GenSpec {
            n_scalar_keys: 3,
            n_array_keys: 2,
            array_len: 5,
            nesting_depth: 2,
            domain_size: 1000,
            ..GenSpec::default()
        },
    };
    let config = BenchConfig {
        base,
        sizes: args.sizes,
        algorithms: args.algorithms,
        threads: args.threads,
        fd_unit_limit: args.fd_unit_limit,
    };
    let rows = run_bench(&config).map_err(|e| match e {
        crate::bench::BenchError::Gen(g) => Failure::new(EXIT_USAGE, g),
        crate::bench::BenchError::Pipeline(p) => pipeline_failure(p),
    })?;
    out.write_all(format_table(&rows).as_bytes()).map_err(io_failure)
}

fn unroll(args: UnrollArgs, out: &mut dyn Write) -> Outcome {
    let collection = load(&args.input)?;
    let table = static_unroll(&collection);
    with_output(&args.output, out, |w| crate::table::write_csv(&table, w).map_err(io::Error::other))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Mine(a) => mine(a, out),
        Command::Verify(a) => verify_cmd(a, out),
        Command::Gen(a) => gen(a, out),
        Command::Bench(a) => bench(a, out),
        Command::Unroll(a) => unroll(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
