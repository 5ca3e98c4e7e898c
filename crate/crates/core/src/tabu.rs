//! Tabu bookkeeping.
//!
//! [`FruState`] forbids repeated unlocking: a dropped vertex becomes locked and
//! is freed when a neighbor enters the clique, unless that same neighbor was the
//! one that freed it last time. Every change is mirrored into the
//! [`ScenarioHash`] as it happens.
//!
//! [`SccState`] is strong configuration checking, the baseline rule set.

use crate::graph::{VertexId, WeightedGraph};
use crate::scenario_hash::ScenarioHash;

#[derive(Clone, Debug)]
pub struct FruState {
    free: Vec<bool>,
    unlocker: Vec<Option<VertexId>>,
    // Valid only while `unlocker` is set.
    unlocker_edge: Vec<u32>,
}

impl FruState {
    /// Everything free, nothing unlocked.
    pub fn new(vertex_count: usize) -> Self {
        FruState {
            free: vec![true; vertex_count],
            unlocker: vec![None; vertex_count],
            unlocker_edge: vec![0; vertex_count],
        }
    }

    #[inline]
    pub fn is_free(&self, v: VertexId) -> bool {
        self.free[v.slot()]
    }

    #[inline]
    pub fn unlocker(&self, v: VertexId) -> Option<VertexId> {
        self.unlocker[v.slot()]
    }

    /// Cached id of the edge between `v` and its unlocker.
    pub fn unlocker_edge(&self, v: VertexId) -> Option<u32> {
        self.unlocker[v.slot()].map(|_| self.unlocker_edge[v.slot()])
    }

    pub fn free_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.free
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(s, _)| VertexId::from_slot(s))
    }

    /// The unlocking relation as `(vertex, unlocker)` pairs.
    pub fn unlock_pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.unlocker
            .iter()
            .enumerate()
            .filter_map(|(s, u)| u.map(|u| (VertexId::from_slot(s), u)))
    }

    /// Rules for `v` entering the clique, with the matching hash updates.
    pub fn on_add(&mut self, graph: &WeightedGraph, v: VertexId, hash: &mut ScenarioHash) {
        hash.enter_clique(v);
        if !self.free[v.slot()] {
            self.free[v.slot()] = true;
            hash.mark_free(v);
        }
        for adj in graph.neighbors(v) {
            let n = adj.vertex;
            let s = n.slot();
            if self.free[s] || self.unlocker[s] == Some(v) {
                continue;
            }
            if let Some(prev) = self.unlocker[s] {
                hash.delete_unlock(n, prev, self.unlocker_edge[s]);
            }
            self.free[s] = true;
            self.unlocker[s] = Some(v);
            self.unlocker_edge[s] = adj.edge;
            hash.insert_unlock(n, v, adj.edge);
            hash.mark_free(n);
        }
    }

    /// Rules for `v` leaving the clique. The unlocker is kept.
    pub fn on_remove(&mut self, v: VertexId, hash: &mut ScenarioHash) {
        hash.leave_clique(v);
        if self.free[v.slot()] {
            self.free[v.slot()] = false;
            hash.mark_locked(v);
        }
    }
}

#[derive(Clone, Debug)]
pub struct SccState {
    conf_change: Vec<bool>,
}

impl SccState {
    pub fn new(vertex_count: usize) -> Self {
        SccState {
            conf_change: vec![true; vertex_count],
        }
    }

    #[inline]
    pub fn conf_change(&self, v: VertexId) -> bool {
        self.conf_change[v.slot()]
    }

    pub fn on_add(&mut self, graph: &WeightedGraph, v: VertexId) {
        for adj in graph.neighbors(v) {
            self.conf_change[adj.vertex.slot()] = true;
        }
    }

    pub fn on_drop(&mut self, v: VertexId) {
        self.conf_change[v.slot()] = false;
    }

    pub fn on_swap_out(&mut self, u: VertexId) {
        self.conf_change[u.slot()] = false;
    }
}

/// The tabu rule set driving a run.
#[derive(Clone, Debug)]
pub enum Tabu {
    Fru(FruState),
    Scc(SccState),
}

impl Tabu {
    /// Whether `v` may be added or swapped in.
    #[inline]
    pub fn allows(&self, v: VertexId) -> bool {
        match self {
            Tabu::Fru(f) => f.is_free(v),
            Tabu::Scc(s) => s.conf_change(v),
        }
    }
}
