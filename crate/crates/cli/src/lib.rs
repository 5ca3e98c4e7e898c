//! Command-line front end: `solve`, `bench`, `verify` and `convert`.
//!
//! Exit codes: 0 success, 1 invalid flags, 2 unreadable or malformed input
//! (or a failed run during `bench`), 3 claimed solution is not a clique,
//! 4 claimed weight does not match.

pub mod bench;
pub mod input;
pub mod report;

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mwc_core::{MarkStore, Mode, SolverConfig, VertexId, DEFAULT_PRIME, DEFAULT_RESTART_PERIOD};
use thiserror::Error;

pub use bench::{run_bench, BenchOptions, SeedRange};
pub use input::{load_graph, InputArgs};
pub use report::RunRecord;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("not a clique: {0}")]
    NotAClique(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("{0} run(s) failed")]
    RunsFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) | CliError::RunsFailed(_) => 2,
            CliError::NotAClique(_) => 3,
            CliError::WeightMismatch(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "mwc", version, about = "Maximum weight clique local search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Run seeded sweeps over a directory of instances and emit CSV.
    Bench(BenchArgs),
    /// Check a claimed clique and weight against an instance.
    Verify(VerifyArgs),
    /// Rewrite an instance as DIMACS with explicit weight lines.
    Convert(ConvertArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Trsc,
    Lscc,
    TrscSolutionHash,
    TrscNoRestart,
    SccNoRestart,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Trsc => Mode::Trsc,
            ModeArg::Lscc => Mode::Lscc,
            ModeArg::TrscSolutionHash => Mode::TrscSolutionHash,
            ModeArg::TrscNoRestart => Mode::TrscNoRestart,
            ModeArg::SccNoRestart => Mode::SccNoRestart,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MarkStoreArg {
    Bitset,
    Sparse,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

/// Search budget and strategy knobs shared by `solve` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Wall-clock budget per run.
    #[arg(long)]
    pub cutoff_seconds: Option<f64>,
    /// Step budget per run; makes runs reproducible.
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// Hash modulus (no primality check).
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, value_enum, default_value_t = MarkStoreArg::Bitset)]
    pub mark_store: MarkStoreArg,
    /// Restart period of the lscc baseline.
    #[arg(long, default_value_t = DEFAULT_RESTART_PERIOD)]
    pub restart_period: u64,
    /// Leave tabu state untouched when a restart drops the clique.
    #[arg(long)]
    pub sweep_keeps_tabu: bool,
    /// Stop once a clique of at least this weight is found.
    #[arg(long)]
    pub target_weight: Option<u64>,
}

impl SearchArgs {
    pub fn config(&self, mode: Mode, seed: u64) -> Result<SolverConfig, CliError> {
        let mut cfg = SolverConfig::new(mode).with_seed(seed);
        if let Some(s) = self.cutoff_seconds {
            if !(s.is_finite() && s > 0.0) {
                return Err(CliError::Usage(format!(
                    "--cutoff-seconds must be positive, got {s}"
                )));
            }
            cfg.cutoff = Some(Duration::from_secs_f64(s));
        }
        cfg.max_steps = self.max_steps;
        if cfg.cutoff.is_none() && cfg.max_steps.is_none() {
            return Err(CliError::Usage(
                "one of --cutoff-seconds or --max-steps is required".into(),
            ));
        }
        if self.prime < 3 || self.prime > u32::MAX as u64 {
            return Err(CliError::Usage(format!(
                "--prime must lie in 3..=4294967295, got {}",
                self.prime
            )));
        }
        if self.restart_period == 0 {
            return Err(CliError::Usage("--restart-period must be positive".into()));
        }
        cfg.prime = self.prime;
        cfg.mark_store = match self.mark_store {
            MarkStoreArg::Bitset => MarkStore::Bitset,
            MarkStoreArg::Sparse => MarkStore::Sparse,
        };
        cfg.restart_period = self.restart_period;
        cfg.restart_sweep_locks = !self.sweep_keeps_tabu;
        cfg.target_weight = self.target_weight;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Trsc)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Also write the best clique in the format `verify` reads.
    #[arg(long)]
    pub solution_out: Option<PathBuf>,
    /// Vertices the first construction must add, in order (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub pin: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory whose regular files are all instances.
    #[arg(long)]
    pub dir: PathBuf,
    #[command(flatten)]
    pub input: input::FormatArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Repeatable; rows are grouped by mode in the order given.
    #[arg(long, value_enum, default_values_t = [ModeArg::Trsc])]
    pub mode: Vec<ModeArg>,
    /// Inclusive seed range `A..B`.
    #[arg(long, default_value = "1..10")]
    pub seeds: SeedRange,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Include wall-clock columns. Defaults to on only when a cutoff is set,
    /// so step-bounded sweeps produce byte-identical output.
    #[arg(long, value_enum, default_value_t = bench::Timing::Auto)]
    pub timing: bench::Timing,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Vertex indices on the first line, claimed weight on the second.
    #[arg(long)]
    pub solution: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, stdout, stderr),
        Command::Bench(a) => cmd_bench(&a, stdout, stderr),
        Command::Verify(a) => cmd_verify(&a, stdout, stderr),
        Command::Convert(a) => cmd_convert(&a, stderr),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = args.input.spec()?;
    let mut cfg = args.search.config(args.mode.into(), args.seed)?;
    let graph = load_graph(&args.input.instance, &spec, err)?;
    cfg.pinned_construction = args
        .pin
        .iter()
        .map(|&i| {
            if i == 0 || i > graph.vertex_count() {
                Err(CliError::Usage(format!("--pin vertex {i} is out of range")))
            } else {
                Ok(VertexId::new(i))
            }
        })
        .collect::<Result<_, _>>()?;
    let result = mwc_core::solve(&graph, cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let record = RunRecord::from_result(
        &args.input.instance.display().to_string(),
        args.seed,
        args.mode.into(),
        &result,
        true,
    );
    match args.output {
        OutputFormat::Text => report::write_text(out, &record, &result.best_clique)?,
        OutputFormat::Json => report::write_json(out, &record, &result.best_clique)?,
    }
    if let Some(path) = &args.solution_out {
        let mut f = std::fs::File::create(path)?;
        report::write_solution(&mut f, &result.best_clique, result.best_weight)?;
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let options = BenchOptions::from_args(args)?;
    let failed = match &args.csv {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            let n = run_bench(&options, &mut f, err)?;
            f.flush()?;
            n
        }
        None => run_bench(&options, out, err)?,
    };
    if failed > 0 {
        return Err(CliError::RunsFailed(failed));
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = args.input.spec()?;
    let graph = load_graph(&args.input.instance, &spec, err)?;
    let text = std::fs::read_to_string(&args.solution)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.solution.display())))?;
    let (indices, claimed) = report::parse_solution(&text)?;
    let verdict = report::check_solution(&graph, &indices, claimed)?;
    writeln!(
        out,
        "ok: clique of {} vertices, weight {verdict}",
        indices.len()
    )?;
    Ok(())
}

fn cmd_convert(args: &ConvertArgs, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = args.input.spec()?;
    let graph = load_graph(&args.input.instance, &spec, err)?;
    let mut f = std::io::BufWriter::new(std::fs::File::create(&args.out)?);
    graph.write_dimacs(&mut f)?;
    f.flush()?;
    Ok(())
}
