//! Incremental modular hash of the search scenario (clique, free set,
//! unlocking relation) and the table of scenarios seen at local optima.
//!
//! Every component owns a disjoint range of powers of two:
//!
//! | component                     | exponents            |
//! |-------------------------------|----------------------|
//! | `v_i ∈ C`                     | `i`                  |
//! | `v_i ∈ F`                     | `n + i`              |
//! | `(v_i, v_j) ∈ U`, `i < j`     | `2n + 1 + e(v_i v_j)` |
//! | `(v_i, v_j) ∈ U`, `i > j`     | `2n + m + 1 + e(v_i v_j)` |
//!
//! so flipping any single fact adds or subtracts one table entry mod `p`.

use std::collections::HashSet;
use std::sync::Arc;

use crate::graph::{VertexId, WeightedGraph};

pub const DEFAULT_PRIME: u64 = 1_000_000_007;

/// `pow2[i] = 2^i mod p` for `i` in `0..=2n+2m`.
#[derive(Clone, Debug)]
pub struct PowTable {
    prime: u64,
    pow2: Vec<u64>,
}

impl PowTable {
    /// Panics if `prime < 3` or it does not fit in 32 bits (sums of two
    /// residues must not overflow).
    pub fn new(vertex_count: usize, edge_count: usize, prime: u64) -> Self {
        assert!(prime > 2, "modulus must exceed 2");
        assert!(prime <= u32::MAX as u64, "modulus must fit in 32 bits");
        let len = 2 * vertex_count + 2 * edge_count + 1;
        let mut pow2 = Vec::with_capacity(len);
        pow2.push(1);
        for i in 1..len {
            pow2.push(2 * pow2[i - 1] % prime);
        }
        PowTable { prime, pow2 }
    }

    #[inline]
    pub fn prime(&self) -> u64 {
        self.prime
    }

    #[inline]
    pub fn get(&self, exponent: usize) -> u64 {
        self.pow2[exponent]
    }

    pub fn len(&self) -> usize {
        self.pow2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pow2.is_empty()
    }
}

/// What the hash covers.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HashScope {
    /// Clique, free set and unlocking relation.
    Scenario,
    /// The clique alone; free/unlock updates leave the value untouched.
    SolutionOnly,
}

/// Which summand a hash delta belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HashComponent {
    Clique,
    Free,
    UnlockAscending,
    UnlockDescending,
}

/// One recorded update, for tests that inspect the exponent layout.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct HashDelta {
    pub component: HashComponent,
    pub exponent: usize,
    pub added: bool,
}

#[derive(Clone, Debug)]
pub struct ScenarioHash {
    value: u64,
    pow: Arc<PowTable>,
    n: usize,
    m: usize,
    scope: HashScope,
    log: Option<Vec<HashDelta>>,
}

impl ScenarioHash {
    /// Hash of the initial scenario: empty clique, every vertex free, no unlocks.
    pub fn new(vertex_count: usize, edge_count: usize, prime: u64, scope: HashScope) -> Self {
        let pow = Arc::new(PowTable::new(vertex_count, edge_count, prime));
        Self::with_table(pow, vertex_count, edge_count, scope)
    }

    pub fn with_table(pow: Arc<PowTable>, n: usize, m: usize, scope: HashScope) -> Self {
        assert!(pow.len() > 2 * n + 2 * m, "power table too short");
        let mut h = ScenarioHash {
            value: 0,
            pow,
            n,
            m,
            scope,
            log: None,
        };
        if scope == HashScope::Scenario {
            for i in 1..=n {
                h.value = (h.value + h.pow.get(n + i)) % h.pow.prime;
            }
        }
        h
    }

    pub fn for_graph(graph: &WeightedGraph, prime: u64, scope: HashScope) -> Self {
        Self::new(graph.vertex_count(), graph.edge_count(), prime, scope)
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn prime(&self) -> u64 {
        self.pow.prime
    }

    pub fn scope(&self) -> HashScope {
        self.scope
    }

    pub fn table(&self) -> &Arc<PowTable> {
        &self.pow
    }

    /// Starts recording every delta applied from now on.
    pub fn record_deltas(&mut self) {
        self.log = Some(Vec::new());
    }

    /// Drains recorded deltas.
    pub fn take_deltas(&mut self) -> Vec<HashDelta> {
        self.log.as_mut().map(std::mem::take).unwrap_or_default()
    }

    #[inline]
    fn apply(&mut self, component: HashComponent, exponent: usize, added: bool) {
        let p = self.pow.prime;
        let term = self.pow.get(exponent);
        self.value = if added {
            (self.value + term) % p
        } else {
            (self.value + p - term) % p
        };
        if let Some(log) = self.log.as_mut() {
            log.push(HashDelta {
                component,
                exponent,
                added,
            });
        }
    }

    #[inline]
    pub fn enter_clique(&mut self, v: VertexId) {
        self.apply(HashComponent::Clique, v.index(), true);
    }

    #[inline]
    pub fn leave_clique(&mut self, v: VertexId) {
        self.apply(HashComponent::Clique, v.index(), false);
    }

    #[inline]
    pub fn mark_free(&mut self, v: VertexId) {
        if self.scope == HashScope::Scenario {
            self.apply(HashComponent::Free, self.n + v.index(), true);
        }
    }

    #[inline]
    pub fn mark_locked(&mut self, v: VertexId) {
        if self.scope == HashScope::Scenario {
            self.apply(HashComponent::Free, self.n + v.index(), false);
        }
    }

    fn unlock_term(
        &self,
        vertex: VertexId,
        unlocker: VertexId,
        edge: u32,
    ) -> (HashComponent, usize) {
        assert_ne!(vertex, unlocker, "a vertex never unlocks itself");
        if vertex < unlocker {
            (
                HashComponent::UnlockAscending,
                2 * self.n + 1 + edge as usize,
            )
        } else {
            (
                HashComponent::UnlockDescending,
                2 * self.n + self.m + 1 + edge as usize,
            )
        }
    }

    /// Records `unlocker(vertex) = unlocker`; `edge` is the id of their edge.
    #[inline]
    pub fn insert_unlock(&mut self, vertex: VertexId, unlocker: VertexId, edge: u32) {
        if self.scope == HashScope::Scenario {
            let (c, e) = self.unlock_term(vertex, unlocker, edge);
            self.apply(c, e, true);
        }
    }

    #[inline]
    pub fn delete_unlock(&mut self, vertex: VertexId, unlocker: VertexId, edge: u32) {
        if self.scope == HashScope::Scenario {
            let (c, e) = self.unlock_term(vertex, unlocker, edge);
            self.apply(c, e, false);
        }
    }

    /// Range of exponents owned by `component`.
    pub fn exponent_range(&self, component: HashComponent) -> std::ops::RangeInclusive<usize> {
        let (n, m) = (self.n, self.m);
        match component {
            HashComponent::Clique => 1..=n,
            HashComponent::Free => n + 1..=2 * n,
            HashComponent::UnlockAscending => 2 * n + 1..=2 * n + m,
            HashComponent::UnlockDescending => 2 * n + m + 1..=2 * n + 2 * m,
        }
    }
}

/// Direct evaluation of the scenario hash from its definition.
///
/// `unlocks` yields `(vertex, unlocker)` pairs. Under [`HashScope::SolutionOnly`]
/// only `clique` contributes.
pub fn recompute_full(
    graph: &WeightedGraph,
    prime: u64,
    scope: HashScope,
    clique: impl IntoIterator<Item = VertexId>,
    free: impl IntoIterator<Item = VertexId>,
    unlocks: impl IntoIterator<Item = (VertexId, VertexId)>,
) -> u64 {
    let n = graph.vertex_count();
    let m = graph.edge_count();
    // Independent of the shared table: square-and-multiply per term.
    let pow = |e: usize| -> u64 {
        let mut base = 2u64 % prime;
        let mut acc = 1u64 % prime;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % prime;
            }
            base = base * base % prime;
            e >>= 1;
        }
        acc
    };
    let mut sum = 0u64;
    for v in clique {
        sum = (sum + pow(v.index())) % prime;
    }
    if scope == HashScope::SolutionOnly {
        return sum;
    }
    for v in free {
        sum = (sum + pow(n + v.index())) % prime;
    }
    for (v, u) in unlocks {
        let e = graph.edge_id(v, u) as usize;
        let exp = if v < u {
            2 * n + 1 + e
        } else {
            2 * n + m + 1 + e
        };
        sum = (sum + pow(exp)) % prime;
    }
    sum
}

/// Storage backend for [`MarkTable`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum MarkStore {
    /// One bit per hash entry, allocated up front (`p / 8` bytes).
    #[default]
    Bitset,
    /// Hash set holding only marked entries.
    Sparse,
}

/// Hash entries seen at local optima. Entries are never cleared during a run.
#[derive(Clone, Debug)]
pub enum MarkTable {
    Bitset { bits: Vec<u64>, count: usize },
    Sparse(HashSet<u64>),
}

impl MarkTable {
    pub fn new(prime: u64, store: MarkStore) -> Self {
        match store {
            MarkStore::Bitset => MarkTable::Bitset {
                bits: vec![0; prime.div_ceil(64) as usize],
                count: 0,
            },
            MarkStore::Sparse => MarkTable::Sparse(HashSet::new()),
        }
    }

    pub fn mark(&mut self, h: u64) {
        match self {
            MarkTable::Bitset { bits, count } => {
                let word = &mut bits[(h / 64) as usize];
                let bit = 1u64 << (h % 64);
                if *word & bit == 0 {
                    *word |= bit;
                    *count += 1;
                }
            }
            MarkTable::Sparse(set) => {
                set.insert(h);
            }
        }
    }

    pub fn is_marked(&self, h: u64) -> bool {
        match self {
            MarkTable::Bitset { bits, .. } => bits[(h / 64) as usize] >> (h % 64) & 1 == 1,
            MarkTable::Sparse(set) => set.contains(&h),
        }
    }

    /// Number of distinct marked entries.
    pub fn len(&self) -> usize {
        match self {
            MarkTable::Bitset { count, .. } => *count,
            MarkTable::Sparse(set) => set.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bytes held by the table's storage.
    pub fn memory_bytes(&self) -> usize {
        match self {
            MarkTable::Bitset { bits, .. } => bits.len() * 8,
            MarkTable::Sparse(set) => set.capacity() * 8,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_str, WeightMode};

    const P: u64 = DEFAULT_PRIME;

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    #[test]
    fn power_table() {
        let t = PowTable::new(3, 3, P);
        assert_eq!(t.get(0), 1);
        assert_eq!(t.get(10), 1024);
        assert_eq!(t.len(), 13);
        let small = PowTable::new(10, 0, 97);
        for i in 1..small.len() {
            assert_eq!(small.get(i), 2 * small.get(i - 1) % 97);
        }
    }

    #[test]
    fn initial_value_counts_free_vertices() {
        assert_eq!(ScenarioHash::new(2, 1, P, HashScope::Scenario).value(), 24);
        assert_eq!(
            ScenarioHash::new(2, 1, P, HashScope::SolutionOnly).value(),
            0
        );
    }

    #[test]
    fn clique_and_free_toggles() {
        let mut h = ScenarioHash::new(3, 3, P, HashScope::Scenario);
        h.enter_clique(v(1));
        assert_eq!(h.value(), 114);
        h.mark_locked(v(2));
        assert_eq!(h.value(), 82);
        h.mark_free(v(2));
        assert_eq!(h.value(), 114);
        h.leave_clique(v(1));
        assert_eq!(h.value(), 112);

        let mut g = ScenarioHash::new(2, 1, P, HashScope::Scenario);
        g.mark_locked(v(1));
        g.mark_locked(v(2));
        assert_eq!(g.value(), 0);
    }

    #[test]
    fn unlock_pairs_use_direction_specific_exponents() {
        let mut h = ScenarioHash::new(3, 3, P, HashScope::Scenario);
        let base = h.value();
        h.insert_unlock(v(1), v(2), 0);
        assert_eq!(h.value(), base + 128);
        h.delete_unlock(v(1), v(2), 0);
        h.insert_unlock(v(2), v(1), 0);
        assert_eq!(h.value(), base + 1024);
        h.delete_unlock(v(2), v(1), 0);
        assert_eq!(h.value(), base);
    }

    #[test]
    #[should_panic]
    fn self_unlock_is_rejected() {
        let mut h = ScenarioHash::new(3, 3, P, HashScope::Scenario);
        h.insert_unlock(v(2), v(2), 0);
    }

    #[test]
    fn wraparound() {
        // 2^i ≡ 1 (mod 7) at i = 3.
        let mut h = ScenarioHash::new(3, 0, 7, HashScope::SolutionOnly);
        h.enter_clique(v(1));
        h.enter_clique(v(2));
        assert_eq!(h.value(), 6);
        h.enter_clique(v(3));
        assert_eq!(h.value(), 0);
        h.leave_clique(v(3));
        assert_eq!(h.value(), 6);
    }

    #[test]
    fn solution_only_scope() {
        let mut h = ScenarioHash::new(3, 3, P, HashScope::SolutionOnly);
        h.enter_clique(v(1));
        h.enter_clique(v(2));
        assert_eq!(h.value(), 6);
        h.mark_locked(v(1));
        h.insert_unlock(v(1), v(2), 0);
        assert_eq!(h.value(), 6);
        h.enter_clique(v(3));
        assert_eq!(h.value(), 14);
    }

    #[test]
    fn recompute_matches_definition() {
        let (g, _) = parse_str("p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n", WeightMode::Mod200).unwrap();
        let none: [VertexId; 0] = [];
        let no_pairs: [(VertexId, VertexId); 0] = [];
        assert_eq!(
            recompute_full(&g, P, HashScope::Scenario, none, none, no_pairs),
            0
        );
        let all = [v(1), v(2), v(3)];
        assert_eq!(
            recompute_full(&g, P, HashScope::Scenario, none, all, no_pairs),
            ScenarioHash::for_graph(&g, P, HashScope::Scenario).value()
        );
        assert_eq!(
            recompute_full(&g, P, HashScope::Scenario, [v(1)], all, [(v(2), v(1))]),
            114 + 1024
        );
    }

    #[test]
    fn mark_table_backends() {
        for store in [MarkStore::Bitset, MarkStore::Sparse] {
            let mut t = MarkTable::new(97, store);
            assert!(!t.is_marked(42));
            t.mark(42);
            t.mark(42);
            assert!(t.is_marked(42));
            assert!(!t.is_marked(41));
            t.mark(96);
            assert!(t.is_marked(96));
            assert_eq!(t.len(), 2);
        }
    }

    #[test]
    fn default_bitset_size() {
        let t = MarkTable::new(P, MarkStore::Bitset);
        let mib = t.memory_bytes() as f64 / (1024.0 * 1024.0);
        assert!((mib - 119.2).abs() < 0.1, "{mib}");
    }
}
