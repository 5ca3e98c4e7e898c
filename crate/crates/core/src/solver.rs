//! The local search driver.
//!
//! Each call to [`Solver::local_move`] performs one step of best-picking
//! multi-neighborhood search: take the best allowed add, otherwise the best
//! allowed swap or the best drop. At a local optimum reached by an improving
//! step, the scenario hash is looked up; a repeat triggers a restart (all
//! clique vertices dropped), a fresh scenario is marked.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clique_state::CliqueState;
use crate::graph::{VertexId, WeightedGraph};
use crate::scenario_hash::{
    recompute_full, HashScope, MarkStore, MarkTable, ScenarioHash, DEFAULT_PRIME,
};
use crate::tabu::{FruState, SccState, Tabu};

pub const DEFAULT_RESTART_PERIOD: u64 = 4000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Forbidding-repeated-unlocking tabu with scenario-hash restarts.
    Trsc,
    /// Strong configuration checking with a restart every `restart_period` steps.
    Lscc,
    /// Like `Trsc`, but the restart hash covers the clique only.
    TrscSolutionHash,
    TrscNoRestart,
    SccNoRestart,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Trsc,
        Mode::Lscc,
        Mode::TrscSolutionHash,
        Mode::TrscNoRestart,
        Mode::SccNoRestart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Trsc => "trsc",
            Mode::Lscc => "lscc",
            Mode::TrscSolutionHash => "trsc-solution-hash",
            Mode::TrscNoRestart => "trsc-no-restart",
            Mode::SccNoRestart => "scc-no-restart",
        }
    }

    pub fn uses_fru(self) -> bool {
        matches!(
            self,
            Mode::Trsc | Mode::TrscSolutionHash | Mode::TrscNoRestart
        )
    }

    fn hash_restarts(self) -> bool {
        matches!(self, Mode::Trsc | Mode::TrscSolutionHash)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.replace('_', "-");
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == normalized)
            .ok_or_else(|| ConfigError::UnknownMode(s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("either a cutoff or a step limit is required")]
    NoBudget,
    #[error("restart period must be positive")]
    ZeroRestartPeriod,
    #[error("hash modulus {0} must lie in 3..=4294967295")]
    BadPrime(u64),
    #[error("pinned construction vertex {0} is out of range")]
    PinnedOutOfRange(usize),
    #[error("graph has no vertices")]
    EmptyGraph,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub mode: Mode,
    pub cutoff: Option<Duration>,
    pub max_steps: Option<u64>,
    pub seed: u64,
    pub restart_period: u64,
    pub prime: u64,
    pub mark_store: MarkStore,
    /// Whether a restart sweep locks the swept vertices.
    pub restart_sweep_locks: bool,
    /// Stop as soon as a clique of at least this weight is found.
    pub target_weight: Option<u64>,
    /// Vertices the first construction adds, in order, before random picks.
    pub pinned_construction: Vec<VertexId>,
}

impl SolverConfig {
    pub fn new(mode: Mode) -> Self {
        SolverConfig {
            mode,
            cutoff: None,
            max_steps: None,
            seed: 1,
            restart_period: DEFAULT_RESTART_PERIOD,
            prime: DEFAULT_PRIME,
            mark_store: MarkStore::Bitset,
            restart_sweep_locks: true,
            target_weight: None,
            pinned_construction: Vec::new(),
        }
    }

    pub fn with_max_steps(mut self, steps: u64) -> Self {
        self.max_steps = Some(steps);
        self
    }

    pub fn with_cutoff(mut self, cutoff: Duration) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_prime(mut self, prime: u64) -> Self {
        self.prime = prime;
        self
    }

    pub fn with_mark_store(mut self, store: MarkStore) -> Self {
        self.mark_store = store;
        self
    }

    pub fn with_target(mut self, weight: u64) -> Self {
        self.target_weight = Some(weight);
        self
    }

    pub fn with_pinned_construction(mut self, order: Vec<VertexId>) -> Self {
        self.pinned_construction = order;
        self
    }

    pub fn validate(&self, graph: &WeightedGraph) -> Result<(), ConfigError> {
        if self.cutoff.is_none() && self.max_steps.is_none() {
            return Err(ConfigError::NoBudget);
        }
        if self.restart_period == 0 {
            return Err(ConfigError::ZeroRestartPeriod);
        }
        if self.prime < 3 || self.prime > u32::MAX as u64 {
            return Err(ConfigError::BadPrime(self.prime));
        }
        if graph.vertex_count() == 0 {
            return Err(ConfigError::EmptyGraph);
        }
        if let Some(v) = self
            .pinned_construction
            .iter()
            .find(|v| v.index() > graph.vertex_count())
        {
            return Err(ConfigError::PinnedOutOfRange(v.index()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverResult {
    pub best_weight: u64,
    /// Sorted by index.
    pub best_clique: Vec<VertexId>,
    /// Seconds from solver start until the best clique was first seen.
    pub time_to_best: f64,
    /// Step counter value when the best clique was first seen.
    pub best_step: u64,
    pub steps: u64,
    pub restarts: u64,
    pub restarts_before_best: u64,
    /// `steps / restarts`, absent without restarts.
    pub restart_period_avg: Option<f64>,
    pub marked_scenarios: u64,
    pub local_optima: u64,
}

impl SolverResult {
    /// Equality on everything except wall-clock timing.
    pub fn same_trajectory(&self, other: &SolverResult) -> bool {
        SolverResult {
            time_to_best: 0.0,
            ..self.clone()
        } == SolverResult {
            time_to_best: 0.0,
            ..other.clone()
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Add(VertexId),
    Drop(VertexId),
    Swap { out: VertexId, into: VertexId },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveOutcome {
    /// A random maximal clique was built at the start of this call.
    pub constructed: bool,
    /// The selected move; absent when the call ended in a restart sweep.
    pub applied: Option<Move>,
    pub restarted: bool,
}

/// Picks the candidate with the largest delta; ties go to the largest age,
/// then to the smallest vertex index.
pub fn select_best<T: Copy>(
    candidates: impl IntoIterator<Item = T>,
    mut key: impl FnMut(T) -> (i64, u64, VertexId),
) -> Option<T> {
    let mut best: Option<(T, (i64, u64, VertexId))> = None;
    for c in candidates {
        let k = key(c);
        let better = match &best {
            None => true,
            Some((_, b)) => k.0 > b.0 || (k.0 == b.0 && (k.1 > b.1 || (k.1 == b.1 && k.2 < b.2))),
        };
        if better {
            best = Some((c, k));
        }
    }
    best.map(|(c, _)| c)
}

pub struct Solver<'g> {
    graph: &'g WeightedGraph,
    config: SolverConfig,
    clique: CliqueState<'g>,
    tabu: Tabu,
    hash: Option<ScenarioHash>,
    marks: Option<MarkTable>,
    rng: ChaCha8Rng,
    pinned: VecDeque<VertexId>,
    last_step_improved: bool,
    started: Instant,
    best_weight: u64,
    best_clique: Vec<VertexId>,
    best_step: u64,
    best_time: Duration,
    restarts: u64,
    restarts_before_best: u64,
    local_optima: u64,
}

impl<'g> Solver<'g> {
    pub fn new(graph: &'g WeightedGraph, config: SolverConfig) -> Result<Self, ConfigError> {
        config.validate(graph)?;
        let n = graph.vertex_count();
        let (tabu, hash) = if config.mode.uses_fru() {
            let scope = if config.mode == Mode::TrscSolutionHash {
                HashScope::SolutionOnly
            } else {
                HashScope::Scenario
            };
            (
                Tabu::Fru(FruState::new(n)),
                Some(ScenarioHash::for_graph(graph, config.prime, scope)),
            )
        } else {
            (Tabu::Scc(SccState::new(n)), None)
        };
        let marks = config
            .mode
            .hash_restarts()
            .then(|| MarkTable::new(config.prime, config.mark_store));
        Ok(Solver {
            graph,
            clique: CliqueState::new(graph),
            tabu,
            hash,
            marks,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            pinned: config.pinned_construction.iter().copied().collect(),
            last_step_improved: true,
            started: Instant::now(),
            best_weight: 0,
            best_clique: Vec::new(),
            best_step: 0,
            best_time: Duration::ZERO,
            restarts: 0,
            restarts_before_best: 0,
            local_optima: 0,
            config,
        })
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn clique(&self) -> &CliqueState<'g> {
        &self.clique
    }

    pub fn tabu(&self) -> &Tabu {
        &self.tabu
    }

    pub fn hash(&self) -> Option<&ScenarioHash> {
        self.hash.as_ref()
    }

    /// Records every hash delta from now on (see [`ScenarioHash::take_deltas`]).
    pub fn hash_mut(&mut self) -> Option<&mut ScenarioHash> {
        self.hash.as_mut()
    }

    pub fn marks(&self) -> Option<&MarkTable> {
        self.marks.as_ref()
    }

    /// The step counter; starts at 1.
    pub fn step(&self) -> u64 {
        self.clique.step()
    }

    /// Steps executed so far.
    pub fn steps_taken(&self) -> u64 {
        self.clique.step() - 1
    }

    pub fn restarts(&self) -> u64 {
        self.restarts
    }

    pub fn best_weight(&self) -> u64 {
        self.best_weight
    }

    pub fn best_clique(&self) -> &[VertexId] {
        &self.best_clique
    }

    pub fn last_step_improved(&self) -> bool {
        self.last_step_improved
    }

    /// Scenario hash of the current state evaluated from scratch; `None` for
    /// modes that keep no hash.
    pub fn recompute_hash(&self) -> Option<u64> {
        let hash = self.hash.as_ref()?;
        let Tabu::Fru(fru) = &self.tabu else {
            return None;
        };
        Some(recompute_full(
            self.graph,
            hash.prime(),
            hash.scope(),
            self.clique.members().iter().copied(),
            fru.free_vertices(),
            fru.unlock_pairs(),
        ))
    }

    fn counts_construction_steps(&self) -> bool {
        !self.config.mode.uses_fru()
    }

    fn apply_add(&mut self, v: VertexId) {
        self.clique.add(v);
        match &mut self.tabu {
            Tabu::Fru(f) => f.on_add(self.graph, v, self.hash.as_mut().expect("fru keeps a hash")),
            Tabu::Scc(s) => s.on_add(self.graph, v),
        }
    }

    fn apply_drop(&mut self, v: VertexId) {
        self.clique.drop(v);
        match &mut self.tabu {
            Tabu::Fru(f) => f.on_remove(v, self.hash.as_mut().expect("fru keeps a hash")),
            Tabu::Scc(s) => s.on_drop(v),
        }
    }

    fn apply_swap(&mut self, out: VertexId, into: VertexId) {
        self.clique.swap(out, into);
        match &mut self.tabu {
            Tabu::Fru(f) => {
                let hash = self.hash.as_mut().expect("fru keeps a hash");
                f.on_remove(out, hash);
                f.on_add(self.graph, into, hash);
            }
            Tabu::Scc(s) => {
                s.on_swap_out(out);
                s.on_add(self.graph, into);
            }
        }
    }

    fn apply(&mut self, mv: Move) {
        match mv {
            Move::Add(v) => self.apply_add(v),
            Move::Drop(v) => self.apply_drop(v),
            Move::Swap { out, into } => self.apply_swap(out, into),
        }
    }

    fn record_best(&mut self) {
        let w = self.clique.weight();
        if w > self.best_weight || (self.best_clique.is_empty() && !self.clique.is_empty()) {
            self.best_weight = w;
            self.best_clique = self.clique.sorted_members();
            self.best_step = self.clique.step();
            self.best_time = self.started.elapsed();
            self.restarts_before_best = self.restarts;
        }
    }

    /// Random maximal clique: one uniform vertex, then uniform picks from `S_add`.
    fn construct(&mut self) {
        let count_steps = self.counts_construction_steps();
        let first = match self.pinned.pop_front() {
            Some(v) => v,
            None => VertexId::new(self.rng.gen_range(1..=self.graph.vertex_count())),
        };
        self.apply_add(first);
        if count_steps {
            self.clique.advance_step();
        }
        while !self.clique.add_candidates().is_empty() {
            let v = match self.pinned.pop_front() {
                Some(v) => {
                    assert!(
                        self.clique.add_candidates().contains(&v),
                        "pinned vertex {v} cannot extend the clique"
                    );
                    v
                }
                None => {
                    let c = self.clique.add_candidates();
                    c[self.rng.gen_range(0..c.len())]
                }
            };
            self.apply_add(v);
            if count_steps {
                self.clique.advance_step();
            }
        }
        self.record_best();
    }

    fn restart_sweep(&mut self) {
        let removed = self.clique.clear();
        if let (Tabu::Fru(f), Some(hash)) = (&mut self.tabu, self.hash.as_mut()) {
            for v in removed {
                if self.config.restart_sweep_locks {
                    f.on_remove(v, hash);
                } else {
                    hash.leave_clique(v);
                }
            }
        }
        self.restarts += 1;
    }

    /// One local search step.
    pub fn local_move(&mut self) -> MoveOutcome {
        let mut outcome = MoveOutcome::default();
        if self.clique.is_empty() {
            self.construct();
            self.last_step_improved = true;
            outcome.constructed = true;
        }

        let g = self.graph;
        let clique = &self.clique;
        let tabu = &self.tabu;
        let w = |v: VertexId| g.weight(v) as i64;

        let add = select_best(
            clique
                .add_candidates()
                .iter()
                .copied()
                .filter(|&v| tabu.allows(v)),
            |v| (w(v), clique.age(v), v),
        );
        let swap = select_best(
            clique
                .swap_candidates()
                .iter()
                .copied()
                .filter(|&(_, into)| tabu.allows(into)),
            |(out, into)| (w(into) - w(out), clique.age(into), into),
        );
        let swap_delta = swap.map(|(out, into)| w(into) - w(out));

        let mv = if let Some(v) = add {
            self.last_step_improved = true;
            match swap {
                Some((out, into)) if w(v) <= swap_delta.unwrap() => Move::Swap { out, into },
                _ => Move::Add(v),
            }
        } else {
            if swap_delta.is_none_or(|d| d < 0) {
                if self.last_step_improved {
                    self.local_optima += 1;
                    self.record_best();
                    if let (Some(marks), Some(hash)) = (self.marks.as_mut(), self.hash.as_ref()) {
                        let h = hash.value();
                        if marks.is_marked(h) {
                            self.restart_sweep();
                            self.clique.advance_step();
                            outcome.restarted = true;
                            return outcome;
                        }
                        marks.mark(h);
                    }
                }
                self.last_step_improved = false;
            } else {
                self.last_step_improved = true;
            }
            let clique = &self.clique;
            let x = select_best(clique.members().iter().copied(), |x| {
                (-w(x), clique.age(x), x)
            })
            .expect("clique is non-empty after construction");
            match swap {
                Some((out, into)) if -w(x) <= swap_delta.unwrap() => Move::Swap { out, into },
                _ => Move::Drop(x),
            }
        };

        self.apply(mv);
        self.clique.advance_step();
        outcome.applied = Some(mv);
        self.record_best();

        if self.config.mode == Mode::Lscc
            && self
                .clique
                .step()
                .is_multiple_of(self.config.restart_period)
        {
            self.clique.clear();
            self.restarts += 1;
            outcome.restarted = true;
        }
        outcome
    }

    fn budget_left(&self) -> bool {
        if let Some(max) = self.config.max_steps {
            if self.steps_taken() >= max {
                return false;
            }
        }
        if let Some(cutoff) = self.config.cutoff {
            if self.started.elapsed() >= cutoff {
                return false;
            }
        }
        if let Some(target) = self.config.target_weight {
            if !self.best_clique.is_empty() && self.best_weight >= target {
                return false;
            }
        }
        true
    }

    /// Runs until the budget is exhausted.
    pub fn run(mut self) -> SolverResult {
        while self.budget_left() {
            self.local_move();
        }
        self.finish()
    }

    pub fn finish(self) -> SolverResult {
        assert!(
            self.graph.is_clique(&self.best_clique),
            "best clique failed validation"
        );
        assert_eq!(self.graph.set_weight(&self.best_clique), self.best_weight);
        let steps = self.steps_taken();
        SolverResult {
            best_weight: self.best_weight,
            best_clique: self.best_clique,
            time_to_best: self.best_time.as_secs_f64(),
            best_step: self.best_step,
            steps,
            restarts: self.restarts,
            restarts_before_best: self.restarts_before_best,
            restart_period_avg: (self.restarts > 0).then(|| steps as f64 / self.restarts as f64),
            marked_scenarios: self.marks.as_ref().map_or(0, |m| m.len() as u64),
            local_optima: self.local_optima,
        }
    }
}

/// Validates `config` and runs a solver to completion.
pub fn solve(graph: &WeightedGraph, config: SolverConfig) -> Result<SolverResult, ConfigError> {
    Ok(Solver::new(graph, config)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_str, WeightMode};

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    #[test]
    fn select_best_rules() {
        let items = [(5, 3, v(1)), (7, 9, v(2)), (7, 2, v(3))];
        assert_eq!(select_best(items, |t| t), Some(items[1]));
        assert_eq!(select_best(Vec::<(i64, u64, VertexId)>::new(), |t| t), None);
        let tied = [(1, 1, v(4)), (1, 1, v(2)), (1, 1, v(3))];
        assert_eq!(select_best(tied, |t| t).unwrap().2, v(2));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
        }
        assert_eq!(
            "trsc_no_restart".parse::<Mode>().unwrap(),
            Mode::TrscNoRestart
        );
        assert!("rrwl".parse::<Mode>().is_err());
    }

    #[test]
    fn config_validation() {
        let (g, _) = parse_str("p edge 2 1\ne 1 2\n", WeightMode::Mod200).unwrap();
        assert_eq!(
            SolverConfig::new(Mode::Trsc).validate(&g),
            Err(ConfigError::NoBudget)
        );
        let ok = SolverConfig::new(Mode::Trsc).with_max_steps(10);
        assert!(ok.validate(&g).is_ok());
        assert_eq!(
            ok.clone().with_prime(2).validate(&g),
            Err(ConfigError::BadPrime(2))
        );
        assert_eq!(
            ok.with_pinned_construction(vec![v(3)]).validate(&g),
            Err(ConfigError::PinnedOutOfRange(3))
        );
    }

    #[test]
    fn single_vertex_graph() {
        let (g, _) = parse_str("p edge 1 0\n", WeightMode::Mod200).unwrap();
        for mode in Mode::ALL {
            let cfg = SolverConfig::new(mode)
                .with_max_steps(50)
                .with_mark_store(MarkStore::Sparse);
            let r = solve(&g, cfg).unwrap();
            assert_eq!(r.best_weight, 2, "{mode}");
            assert_eq!(r.best_clique, vec![v(1)]);
        }
    }

    #[test]
    fn edgeless_graph_finds_heaviest_vertex() {
        let (g, _) = parse_str("p edge 3 0\nv 1 5\nv 2 1\nv 3 7\n", WeightMode::FromFile).unwrap();
        let r = solve(
            &g,
            SolverConfig::new(Mode::Trsc)
                .with_max_steps(200)
                .with_mark_store(MarkStore::Sparse),
        )
        .unwrap();
        assert_eq!(r.best_weight, 7);
        assert_eq!(r.best_clique, vec![v(3)]);
    }

    #[test]
    fn zero_weight_graph_still_reports_a_vertex() {
        let (g, _) = parse_str("p edge 2 0\nv 1 0\nv 2 0\n", WeightMode::FromFile).unwrap();
        let r = solve(&g, SolverConfig::new(Mode::Lscc).with_max_steps(5)).unwrap();
        assert_eq!(r.best_weight, 0);
        assert_eq!(r.best_clique.len(), 1);
    }

    #[test]
    fn lscc_restarts_on_period() {
        let (g, _) = parse_str("p edge 3 2\ne 1 2\ne 2 3\n", WeightMode::Mod200).unwrap();
        let mut cfg = SolverConfig::new(Mode::Lscc).with_max_steps(100);
        cfg.restart_period = 1;
        let mut s = Solver::new(&g, cfg).unwrap();
        for _ in 0..20 {
            let out = s.local_move();
            assert!(out.restarted);
            assert!(s.clique().is_empty());
        }
    }
}
