//! Seeded sweeps over a directory of instances.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use mwc_core::{Mode, SolverConfig, WeightedGraph};
use rayon::prelude::*;

use crate::input::{load_graph, LoadSpec};
use crate::report::{fixed2, RunRecord, CSV_COLUMNS, CSV_VERSION_LINE};
use crate::{BenchArgs, CliError};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Timing {
    /// On when a wall-clock cutoff is set, off otherwise.
    Auto,
    On,
    Off,
}

/// Inclusive range of seeds, written `A..B`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SeedRange {
    pub first: u64,
    pub last: u64,
}

impl SeedRange {
    pub fn iter(self) -> impl Iterator<Item = u64> {
        self.first..=self.last
    }

    pub fn len(self) -> usize {
        (self.last - self.first + 1) as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }
}

impl FromStr for SeedRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad seed {t:?} in {s:?}"))
        };
        let (first, last) = (parse(a)?, parse(b)?);
        if first > last {
            return Err(format!("empty seed range {s:?}"));
        }
        Ok(SeedRange { first, last })
    }
}

/// A fully resolved sweep.
#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub instances: Vec<PathBuf>,
    pub spec: LoadSpec,
    /// One base configuration per mode, seeds applied per run.
    pub configs: Vec<SolverConfig>,
    pub seeds: SeedRange,
    pub jobs: usize,
    pub timing: bool,
}

impl BenchOptions {
    pub fn from_args(args: &BenchArgs) -> Result<Self, CliError> {
        let spec = args.input.spec()?;
        if args.jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        let mut modes: Vec<Mode> = Vec::new();
        for m in &args.mode {
            let m = Mode::from(*m);
            if !modes.contains(&m) {
                modes.push(m);
            }
        }
        let configs = modes
            .into_iter()
            .map(|m| args.search.config(m, 0))
            .collect::<Result<Vec<_>, _>>()?;
        let entries = std::fs::read_dir(&args.dir)
            .map_err(|e| CliError::Input(format!("{}: {e}", args.dir.display())))?;
        let mut instances = Vec::new();
        for entry in entries {
            let path = entry?.path();
            if path.is_file() {
                instances.push(path);
            }
        }
        instances.sort();
        let timing = match args.timing {
            Timing::On => true,
            Timing::Off => false,
            Timing::Auto => args.search.cutoff_seconds.is_some(),
        };
        Ok(BenchOptions {
            instances,
            spec,
            configs,
            seeds: args.seeds,
            jobs: args.jobs,
            timing,
        })
    }
}

enum Outcome {
    Ok(RunRecord),
    Failed {
        instance: String,
        seed: u64,
        mode: Mode,
        error: String,
    },
}

struct Job<'a> {
    instance: usize,
    graph: &'a Result<WeightedGraph, String>,
    config: &'a SolverConfig,
    seed: u64,
}

/// Runs every (instance, mode, seed) combination and writes the CSV to `out`.
/// Returns the number of failed runs.
pub fn run_bench(
    opts: &BenchOptions,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<usize, CliError> {
    let names: Vec<String> = opts
        .instances
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    let graphs: Vec<Result<WeightedGraph, String>> = opts
        .instances
        .iter()
        .map(|p| load_graph(p, &opts.spec, diag).map_err(|e| e.to_string()))
        .collect();

    // Already in emission order: instance, then mode, then seed.
    let mut jobs = Vec::new();
    for (i, graph) in graphs.iter().enumerate() {
        for config in &opts.configs {
            for seed in opts.seeds.iter() {
                jobs.push(Job {
                    instance: i,
                    graph,
                    config,
                    seed,
                });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let run = |job: &Job| -> Outcome {
        let name = &names[job.instance];
        let mode = job.config.mode;
        let fail = |error: String| Outcome::Failed {
            instance: name.clone(),
            seed: job.seed,
            mode,
            error,
        };
        let graph = match job.graph {
            Ok(g) => g,
            Err(e) => return fail(e.clone()),
        };
        let mut cfg = job.config.clone();
        cfg.seed = job.seed;
        match mwc_core::solve(graph, cfg) {
            Ok(r) => Outcome::Ok(RunRecord::from_result(
                name,
                job.seed,
                mode,
                &r,
                opts.timing,
            )),
            Err(e) => fail(e.to_string()),
        }
    };
    // par_iter + collect keeps input order regardless of scheduling.
    let outcomes: Vec<Outcome> = pool.install(|| jobs.par_iter().map(run).collect());

    let mut csv = csv::WriterBuilder::new().from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Input(e.to_string());
    csv.write_record(CSV_COLUMNS).map_err(csv_err)?;
    let mut failed = 0;
    for group in outcomes.chunks(opts.seeds.len()) {
        let mut done = Vec::new();
        for o in group {
            match o {
                Outcome::Ok(r) => {
                    csv.write_record(r.csv_fields()).map_err(csv_err)?;
                    done.push(r);
                }
                Outcome::Failed {
                    instance,
                    seed,
                    mode,
                    error,
                } => {
                    failed += 1;
                    let _ = writeln!(diag, "error: {instance} seed {seed} {mode}: {error}");
                    let mut row = vec![String::new(); CSV_COLUMNS.len()];
                    row[0] = instance.clone();
                    row[1] = seed.to_string();
                    row[2] = mode.name().to_string();
                    row[10] = error.clone();
                    csv.write_record(&row).map_err(csv_err)?;
                }
            }
        }
        if let Some(row) = summary_row(&done) {
            csv.write_record(&row).map_err(csv_err)?;
        }
    }
    let body = csv
        .into_inner()
        .map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(out, "{CSV_VERSION_LINE}")?;
    out.write_all(&body)?;
    Ok(failed)
}

/// Aggregate over successful runs of one (instance, mode). The restart period
/// is total steps over total restarts.
fn summary_row(runs: &[&RunRecord]) -> Option<Vec<String>> {
    let first = runs.first()?;
    let w_max = runs.iter().map(|r| r.best_weight).max().unwrap_or(0);
    let w_avg = runs.iter().map(|r| r.best_weight as f64).sum::<f64>() / runs.len() as f64;
    let steps: u64 = runs.iter().map(|r| r.steps).sum();
    let restarts: u64 = runs.iter().map(|r| r.restarts).sum();
    let period = (restarts > 0).then(|| steps as f64 / restarts as f64);
    Some(vec![
        first.instance.clone(),
        "summary".into(),
        first.mode.clone(),
        w_max.to_string(),
        String::new(),
        steps.to_string(),
        restarts.to_string(),
        fixed2(period),
        w_max.to_string(),
        format!("{w_avg:.2}"),
        String::new(),
    ])
}
