use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use mwc_core::{parse_instance, WeightMode, WeightedGraph};

use crate::CliError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    /// Unweighted DIMACS; weights come from the mod-200 rule.
    Dimacs,
    /// DIMACS with `v i w` weight lines.
    Wclq,
    Auto,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightsArg {
    Mod200,
    File,
    Auto,
}

#[derive(Debug, Clone, Args)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    /// Defaults follow `--format`: mod200 for dimacs, file for wclq, auto otherwise.
    #[arg(long, value_enum)]
    pub weights: Option<WeightsArg>,
    /// Solve on the complement graph (independent set instances).
    #[arg(long)]
    pub complement: bool,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct LoadSpec {
    pub weights: WeightMode,
    pub complement: bool,
}

impl FormatArgs {
    pub fn spec(&self) -> Result<LoadSpec, CliError> {
        let weights = match (self.format, self.weights) {
            (FormatArg::Dimacs, Some(WeightsArg::File)) => {
                return Err(CliError::Usage(
                    "--weights file needs a weighted format (wclq or auto)".into(),
                ))
            }
            (_, Some(WeightsArg::Mod200)) => WeightMode::Mod200,
            (_, Some(WeightsArg::File)) => WeightMode::FromFile,
            (_, Some(WeightsArg::Auto)) => WeightMode::Auto,
            (FormatArg::Dimacs, None) => WeightMode::Mod200,
            (FormatArg::Wclq, None) => WeightMode::FromFile,
            (FormatArg::Auto, None) => WeightMode::Auto,
        };
        Ok(LoadSpec {
            weights,
            complement: self.complement,
        })
    }
}

impl InputArgs {
    pub fn spec(&self) -> Result<LoadSpec, CliError> {
        self.format.spec()
    }
}

/// Reads and validates an instance; load diagnostics go to `diag`.
pub fn load_graph(
    path: &Path,
    spec: &LoadSpec,
    diag: &mut dyn Write,
) -> Result<WeightedGraph, CliError> {
    let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let (graph, report) = parse_instance(BufReader::new(file), spec.weights)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if report.duplicate_edges > 0 || report.self_loops > 0 {
        let _ = writeln!(
            diag,
            "warning: {}: dropped {} duplicate edge(s) and {} self-loop(s)",
            path.display(),
            report.duplicate_edges,
            report.self_loops
        );
    }
    Ok(if spec.complement {
        graph.complement()
    } else {
        graph
    })
}
