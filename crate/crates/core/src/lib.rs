//! Local search for the maximum weight clique problem.
//!
//! The main solver combines a tabu rule that forbids a vertex from being
//! unlocked by the same neighbor twice in a row with restarts triggered when a
//! whole search scenario (clique, tabu status, unlocking relation) recurs at a
//! local optimum. A configuration-checking baseline with periodic restarts and
//! a clique-only-hash ablation share the same machinery.
//!
//! ```
//! use mwc_core::{fixtures, solve, Mode, SolverConfig};
//!
//! let graph = fixtures::dead_loop();
//! let result = solve(&graph, SolverConfig::new(Mode::Trsc).with_max_steps(10_000)).unwrap();
//! assert_eq!(result.best_weight, 193);
//! ```

pub mod clique_state;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod scenario_hash;
pub mod solver;
pub mod tabu;

pub use clique_state::CliqueState;
pub use graph::{
    parse_instance, parse_str, random_graph, GraphError, LoadReport, RandomWeights, VertexId,
    WeightMode, WeightedGraph,
};
pub use oracle::{exact_mwc, OracleError, OracleResult};
pub use scenario_hash::{HashScope, MarkStore, MarkTable, PowTable, ScenarioHash, DEFAULT_PRIME};
pub use solver::{
    select_best, solve, ConfigError, Mode, Move, MoveOutcome, Solver, SolverConfig, SolverResult,
    DEFAULT_RESTART_PERIOD,
};
pub use tabu::{FruState, SccState, Tabu};
