//! Exact maximum weight clique for small graphs (at most 40 vertices).
//!
//! Branch and bound over 64-bit vertex masks, branching on the heaviest
//! candidate first and pruning when the current weight plus all remaining
//! candidate weight cannot beat the incumbent.

use thiserror::Error;

use crate::graph::{VertexId, WeightedGraph};

pub const MAX_ORACLE_VERTICES: usize = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exact search supports at most {MAX_ORACLE_VERTICES} vertices, got {0}")]
    TooLarge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub weight: u64,
    /// Sorted by index.
    pub clique: Vec<VertexId>,
}

struct Search<'a> {
    adj: Vec<u64>,
    weights: &'a [u64],
    // Slots by weight descending, index ascending.
    order: Vec<usize>,
}

impl Search<'_> {
    fn mask_weight(&self, mut mask: u64) -> u64 {
        let mut sum = 0;
        while mask != 0 {
            sum += self.weights[mask.trailing_zeros() as usize];
            mask &= mask - 1;
        }
        sum
    }

    /// Largest weight of a clique inside `cands`, given it beats `floor`;
    /// returns `floor` otherwise.
    fn best_within(&self, cands: u64, current: u64, floor: u64) -> u64 {
        let mut best = floor.max(current);
        let mut cands = cands;
        for &s in &self.order {
            if cands == 0 || current + self.mask_weight(cands) <= best {
                break;
            }
            if cands >> s & 1 == 0 {
                continue;
            }
            let w = self.best_within(cands & self.adj[s], current + self.weights[s], best);
            best = best.max(w);
            cands &= !(1u64 << s);
        }
        best
    }

    /// Whether some clique within `cands` reaches exactly `need` extra weight.
    /// Every clique weighs at most the optimum, so "at least" equals "exactly".
    fn reaches(&self, cands: u64, need: u64) -> bool {
        need == 0 || self.best_within(cands, 0, need.saturating_sub(1)) >= need
    }
}

pub fn exact_mwc(graph: &WeightedGraph) -> Result<OracleResult, OracleError> {
    let n = graph.vertex_count();
    if n > MAX_ORACLE_VERTICES {
        return Err(OracleError::TooLarge(n));
    }
    let adj: Vec<u64> = graph
        .vertices()
        .map(|v| {
            graph
                .neighbors(v)
                .iter()
                .fold(0u64, |m, a| m | 1 << a.vertex.slot())
        })
        .collect();
    let weights = graph.weights();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
    let search = Search {
        adj,
        weights,
        order,
    };

    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if n == 0 {
        return Ok(OracleResult {
            weight: 0,
            clique: Vec::new(),
        });
    }
    let optimum = search.best_within(all, 0, 0);

    // Lexicographically smallest optimal clique: extend a sorted prefix with
    // the smallest vertex that still admits an optimal completion.
    let mut prefix = Vec::new();
    let mut weight = 0u64;
    let mut cands = all;
    while weight < optimum || prefix.is_empty() {
        let next = (0..n)
            .filter(|&s| cands >> s & 1 == 1)
            .find(|&s| {
                let w = weight + weights[s];
                let rest = cands & search.adj[s] & !((1u64 << (s + 1)) - 1);
                w <= optimum && search.reaches(rest, optimum - w)
            })
            .expect("an optimal completion exists");
        prefix.push(VertexId::new(next + 1));
        weight += weights[next];
        cands &= search.adj[next] & !((1u64 << (next + 1)) - 1);
    }
    Ok(OracleResult {
        weight,
        clique: prefix,
    })
}
