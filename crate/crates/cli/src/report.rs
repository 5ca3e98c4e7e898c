//! Run records and the text, JSON, CSV and solution-file renderings.

use std::io::Write;

use mwc_core::{Mode, SolverResult, VertexId, WeightedGraph};
use serde::Serialize;

use crate::CliError;

/// Versioned first line of every bench CSV.
pub const CSV_VERSION_LINE: &str = "# mwc bench csv v1";

/// The eight run columns first, then the summary and error columns.
pub const CSV_COLUMNS: [&str; 11] = [
    "instance",
    "seed",
    "mode",
    "best_weight",
    "time_to_best_ms",
    "steps",
    "restarts",
    "restart_period_avg",
    "w_max",
    "w_avg",
    "error",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub seed: u64,
    pub mode: String,
    pub best_weight: u64,
    /// Absent when timing is disabled.
    pub time_to_best_ms: Option<u64>,
    pub steps: u64,
    pub restarts: u64,
    pub restart_period_avg: Option<f64>,
}

impl RunRecord {
    pub fn from_result(
        instance: &str,
        seed: u64,
        mode: Mode,
        r: &SolverResult,
        timing: bool,
    ) -> Self {
        RunRecord {
            instance: instance.to_string(),
            seed,
            mode: mode.name().to_string(),
            best_weight: r.best_weight,
            time_to_best_ms: timing.then(|| (r.time_to_best * 1000.0).round() as u64),
            steps: r.steps,
            restarts: r.restarts,
            restart_period_avg: r.restart_period_avg,
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.seed.to_string(),
            self.mode.clone(),
            self.best_weight.to_string(),
            opt(self.time_to_best_ms),
            self.steps.to_string(),
            self.restarts.to_string(),
            fixed2(self.restart_period_avg),
            String::new(),
            String::new(),
            String::new(),
        ]
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub(crate) fn fixed2(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_default()
}

fn indices(clique: &[VertexId]) -> String {
    clique
        .iter()
        .map(|v| v.index().to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_text(out: &mut dyn Write, r: &RunRecord, clique: &[VertexId]) -> std::io::Result<()> {
    writeln!(out, "instance: {}", r.instance)?;
    writeln!(out, "mode: {}", r.mode)?;
    writeln!(out, "seed: {}", r.seed)?;
    writeln!(out, "best_weight: {}", r.best_weight)?;
    writeln!(out, "clique: {}", indices(clique))?;
    writeln!(out, "time_to_best_ms: {}", opt(r.time_to_best_ms))?;
    writeln!(out, "steps: {}", r.steps)?;
    writeln!(out, "restarts: {}", r.restarts)?;
    writeln!(out, "restart_period_avg: {}", fixed2(r.restart_period_avg))
}

#[derive(Serialize)]
struct JsonReport<'a> {
    #[serde(flatten)]
    record: &'a RunRecord,
    clique: Vec<usize>,
}

pub fn write_json(out: &mut dyn Write, r: &RunRecord, clique: &[VertexId]) -> std::io::Result<()> {
    let report = JsonReport {
        record: r,
        clique: clique.iter().map(|v| v.index()).collect(),
    };
    serde_json::to_writer_pretty(&mut *out, &report)?;
    writeln!(out)
}

pub fn write_solution(
    out: &mut dyn Write,
    clique: &[VertexId],
    weight: u64,
) -> std::io::Result<()> {
    writeln!(out, "{}", indices(clique))?;
    writeln!(out, "{weight}")
}

/// First content line: vertex indices. Second: claimed weight. Lines starting
/// with `c` or `#` are comments.
pub fn parse_solution(text: &str) -> Result<(Vec<usize>, u64), CliError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'));
    let bad = |what: &str| CliError::Input(format!("solution file: {what}"));
    let set = lines.next().ok_or_else(|| bad("missing vertex line"))?;
    let set = set
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad("vertex line must hold integers"))?;
    let weight = lines
        .next()
        .ok_or_else(|| bad("missing weight line"))?
        .parse::<u64>()
        .map_err(|_| bad("weight must be a non-negative integer"))?;
    if lines.next().is_some() {
        return Err(bad("unexpected trailing content"));
    }
    Ok((set, weight))
}

/// Returns the actual weight when `indices` is a clique weighing `claimed`.
pub fn check_solution(
    graph: &WeightedGraph,
    indices: &[usize],
    claimed: u64,
) -> Result<u64, CliError> {
    if let Some(&i) = indices
        .iter()
        .find(|&&i| i == 0 || i > graph.vertex_count())
    {
        return Err(CliError::NotAClique(format!("vertex {i} does not exist")));
    }
    let set: Vec<VertexId> = indices.iter().map(|&i| VertexId::new(i)).collect();
    if let Some((a, b)) = graph.first_non_adjacent_pair(&set) {
        let why = if a == b {
            format!("vertex {} listed twice", a.index())
        } else {
            format!("{} and {} are not adjacent", a.index(), b.index())
        };
        return Err(CliError::NotAClique(why));
    }
    let actual = graph.set_weight(&set);
    if actual != claimed {
        return Err(CliError::WeightMismatch(format!(
            "claimed {claimed}, actual {actual}"
        )));
    }
    Ok(actual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mwc_core::fixtures;

    #[test]
    fn solution_parsing() {
        assert_eq!(
            parse_solution("3 5 6 8\n193\n").unwrap(),
            (vec![3, 5, 6, 8], 193)
        );
        assert_eq!(
            parse_solution("c comment\n\n1 2\n# x\n5\n").unwrap(),
            (vec![1, 2], 5)
        );
        assert!(parse_solution("1 2\n").is_err());
        assert!(parse_solution("1 x\n3\n").is_err());
        assert!(parse_solution("1\n2\n3\n").is_err());
    }

    #[test]
    fn solution_checks() {
        let g = fixtures::dead_loop();
        assert_eq!(check_solution(&g, &[3, 5, 6, 8], 193).unwrap(), 193);
        let e = check_solution(&g, &[3, 5, 6, 8], 190).unwrap_err();
        assert_eq!(e.exit_code(), 4);
        let e = check_solution(&g, &[1, 2], 30).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("1 and 2"));
        assert_eq!(check_solution(&g, &[3, 3], 6).unwrap_err().exit_code(), 3);
        assert_eq!(check_solution(&g, &[10], 0).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn fixed_formatting() {
        assert_eq!(fixed2(Some(4000.0)), "4000.00");
        assert_eq!(fixed2(Some(1.0 / 3.0)), "0.33");
        assert_eq!(fixed2(None), "");
    }
}
