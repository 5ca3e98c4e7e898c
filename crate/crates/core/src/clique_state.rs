//! The current clique and its add/swap neighborhoods.
//!
//! For every vertex `x` we keep `|N(x) ∩ C|` and the sum of the indices in
//! `N(x) ∩ C`, updated by walking `N(v)` whenever `v` enters or leaves `C`
//! (cost `O(deg v)`). From those two counters:
//!
//! * `missing(x) = |C| - |N(x) ∩ C|`
//! * if `missing(x) = 1`, the unique non-adjacent member has index
//!   `Σ_{c ∈ C} index(c) - Σ_{c ∈ N(x) ∩ C} index(c)`.
//!
//! `S_add` is `{x ∉ C : missing(x) = 0}` and `S_swap` holds `(u, x)` for
//! `missing(x) = 1` with witness `u`. After each move both lists are rebuilt
//! from the neighborhoods of the two lowest-degree members: a vertex missing at
//! most one member must be adjacent to one of them.

use std::collections::BTreeSet;

use crate::graph::{VertexId, WeightedGraph};

#[derive(Clone, Debug)]
pub struct CliqueState<'g> {
    graph: &'g WeightedGraph,
    in_clique: Vec<bool>,
    members: Vec<VertexId>,
    position: Vec<usize>,
    weight: u64,
    adj_in_clique: Vec<u32>,
    adj_index_sum: Vec<u64>,
    clique_index_sum: u64,
    last_flip: Vec<u64>,
    step: u64,
    add_set: Vec<VertexId>,
    swap_set: Vec<(VertexId, VertexId)>,
    seen: Vec<u32>,
    epoch: u32,
}

const NOT_MEMBER: usize = usize::MAX;

impl<'g> CliqueState<'g> {
    /// Empty clique at step 1; every vertex last flipped at step 0.
    pub fn new(graph: &'g WeightedGraph) -> Self {
        let n = graph.vertex_count();
        CliqueState {
            graph,
            in_clique: vec![false; n],
            members: Vec::new(),
            position: vec![NOT_MEMBER; n],
            weight: 0,
            adj_in_clique: vec![0; n],
            adj_index_sum: vec![0; n],
            clique_index_sum: 0,
            last_flip: vec![0; n],
            step: 1,
            add_set: Vec::new(),
            swap_set: Vec::new(),
            seen: vec![0; n],
            epoch: 0,
        }
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    #[inline]
    pub fn step(&self) -> u64 {
        self.step
    }

    #[inline]
    pub fn advance_step(&mut self) {
        self.step += 1;
    }

    #[inline]
    pub fn last_flip_step(&self, v: VertexId) -> u64 {
        self.last_flip[v.slot()]
    }

    /// Steps since `v` last entered or left the clique.
    #[inline]
    pub fn age(&self, v: VertexId) -> u64 {
        self.step - self.last_flip[v.slot()]
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.in_clique[v.slot()]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn weight(&self) -> u64 {
        self.weight
    }

    /// Members in no particular order.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn sorted_members(&self) -> Vec<VertexId> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }

    /// Number of clique members not adjacent to `v` (excluding `v` itself).
    pub fn missing_count(&self, v: VertexId) -> usize {
        let own = usize::from(self.contains(v));
        self.members.len() - own - self.adj_in_clique[v.slot()] as usize
    }

    /// Sum of indices of the clique members counted by [`Self::missing_count`].
    pub fn missing_witness_sum(&self, v: VertexId) -> u64 {
        let own = if self.contains(v) {
            v.index() as u64
        } else {
            0
        };
        self.clique_index_sum - own - self.adj_index_sum[v.slot()]
    }

    /// Vertices that can be added while keeping a clique.
    pub fn add_candidates(&self) -> &[VertexId] {
        &self.add_set
    }

    /// `(leaving, entering)` pairs that can be swapped while keeping a clique.
    pub fn swap_candidates(&self) -> &[(VertexId, VertexId)] {
        &self.swap_set
    }

    fn enter(&mut self, v: VertexId) {
        let s = v.slot();
        assert!(!self.in_clique[s], "{v} is already in the clique");
        assert!(
            self.missing_count(v) == 0,
            "{v} is not adjacent to every clique member"
        );
        self.in_clique[s] = true;
        self.position[s] = self.members.len();
        self.members.push(v);
        self.weight += self.graph.weight(v);
        let idx = v.index() as u64;
        self.clique_index_sum += idx;
        for a in self.graph.neighbors(v) {
            self.adj_in_clique[a.vertex.slot()] += 1;
            self.adj_index_sum[a.vertex.slot()] += idx;
        }
        self.last_flip[s] = self.step;
    }

    fn leave(&mut self, v: VertexId) {
        let s = v.slot();
        assert!(self.in_clique[s], "{v} is not in the clique");
        self.in_clique[s] = false;
        let pos = self.position[s];
        self.members.swap_remove(pos);
        if let Some(&moved) = self.members.get(pos) {
            self.position[moved.slot()] = pos;
        }
        self.position[s] = NOT_MEMBER;
        self.weight -= self.graph.weight(v);
        let idx = v.index() as u64;
        self.clique_index_sum -= idx;
        for a in self.graph.neighbors(v) {
            self.adj_in_clique[a.vertex.slot()] -= 1;
            self.adj_index_sum[a.vertex.slot()] -= idx;
        }
        self.last_flip[s] = self.step;
    }

    /// Adds `v`, which must be adjacent to every member.
    pub fn add(&mut self, v: VertexId) {
        self.enter(v);
        self.refresh_candidates();
    }

    pub fn drop(&mut self, v: VertexId) {
        self.leave(v);
        self.refresh_candidates();
    }

    /// Replaces `out` by `into`; `(out, into)` must be in `S_swap`.
    pub fn swap(&mut self, out: VertexId, into: VertexId) {
        assert!(
            !self.contains(into)
                && self.missing_count(into) == 1
                && self.missing_witness_sum(into) == out.index() as u64
                && self.members.len() > 1,
            "({out}, {into}) is not a swap pair"
        );
        self.leave(out);
        self.enter(into);
        self.refresh_candidates();
    }

    /// Drops every member; returns them in the order they were removed.
    pub fn clear(&mut self) -> Vec<VertexId> {
        let removed = self.sorted_members();
        for &v in &removed {
            self.leave(v);
        }
        self.refresh_candidates();
        removed
    }

    fn refresh_candidates(&mut self) {
        self.add_set.clear();
        self.swap_set.clear();
        let size = self.members.len();
        if size == 0 {
            return;
        }
        let g = self.graph;
        if size == 1 {
            self.add_set
                .extend(g.neighbors(self.members[0]).iter().map(|a| a.vertex));
            return;
        }

        let (mut a, mut b) = (self.members[0], self.members[1]);
        if g.degree(b) < g.degree(a) {
            std::mem::swap(&mut a, &mut b);
        }
        for &c in &self.members[2..] {
            if g.degree(c) < g.degree(a) {
                b = a;
                a = c;
            } else if g.degree(c) < g.degree(b) {
                b = c;
            }
        }

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.fill(0);
            self.epoch = 1;
        }
        for pivot in [a, b] {
            for adj in g.neighbors(pivot) {
                let x = adj.vertex;
                let s = x.slot();
                if self.seen[s] == self.epoch || self.in_clique[s] {
                    continue;
                }
                self.seen[s] = self.epoch;
                match size - self.adj_in_clique[s] as usize {
                    0 => self.add_set.push(x),
                    1 => {
                        let witness = self.clique_index_sum - self.adj_index_sum[s];
                        self.swap_set.push((VertexId::new(witness as usize), x));
                    }
                    _ => {}
                }
            }
        }
    }

    /// `S_add` and `S_swap` evaluated from their definitions with adjacency
    /// queries only. Test oracle.
    pub fn reference_candidates(&self) -> (BTreeSet<VertexId>, BTreeSet<(VertexId, VertexId)>) {
        let g = self.graph;
        let members = &self.members;
        let mut adds = BTreeSet::new();
        let mut swaps = BTreeSet::new();
        for x in g.vertices().filter(|&x| !self.contains(x)) {
            if !members.is_empty() && members.iter().all(|&c| g.is_adjacent(c, x)) {
                adds.insert(x);
            }
            if members.len() > 1 {
                for &u in members {
                    if !g.is_adjacent(u, x)
                        && members.iter().all(|&w| w == u || g.is_adjacent(w, x))
                    {
                        swaps.insert((u, x));
                    }
                }
            }
        }
        (adds, swaps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_str, random_graph, RandomWeights, WeightMode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    fn graph(text: &str) -> WeightedGraph {
        parse_str(text, WeightMode::Mod200).unwrap().0
    }

    fn adds(s: &CliqueState) -> BTreeSet<VertexId> {
        s.add_candidates().iter().copied().collect()
    }

    fn swaps(s: &CliqueState) -> BTreeSet<(VertexId, VertexId)> {
        s.swap_candidates().iter().copied().collect()
    }

    fn assert_consistent(s: &CliqueState) {
        let (ra, rs) = s.reference_candidates();
        assert_eq!(adds(s), ra);
        assert_eq!(swaps(s), rs);
        assert!(s.graph().is_clique(s.members()));
        assert_eq!(s.weight(), s.graph().set_weight(s.members()));
        assert_eq!(s.add_candidates().len(), ra.len(), "duplicates in S_add");
        assert_eq!(s.swap_candidates().len(), rs.len(), "duplicates in S_swap");
    }

    #[test]
    fn triangle_add_and_drop() {
        let g = graph("p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
        let mut s = CliqueState::new(&g);
        assert!(adds(&s).is_empty());
        s.add(v(1));
        assert_eq!(s.weight(), 2);
        assert_eq!(adds(&s), [v(2), v(3)].into());
        s.add(v(2));
        assert_eq!(s.weight(), 5);
        assert_eq!(adds(&s), [v(3)].into());
        s.add(v(3));
        s.drop(v(1));
        assert_eq!(s.weight(), 7);
        assert_eq!(adds(&s), [v(1)].into());
        assert_consistent(&s);
    }

    #[test]
    fn dropping_last_member_empties_candidates() {
        let g = graph("p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
        let mut s = CliqueState::new(&g);
        s.add(v(1));
        s.drop(v(1));
        assert!(s.is_empty());
        assert_eq!(s.weight(), 0);
        assert!(adds(&s).is_empty());
        assert!(swaps(&s).is_empty());
    }

    #[test]
    fn path_swap() {
        let g = graph("p edge 3 2\ne 1 2\ne 2 3\n");
        let mut s = CliqueState::new(&g);
        s.add(v(2));
        assert!(swaps(&s).is_empty(), "no swaps with one member");
        s.add(v(1));
        assert!(adds(&s).is_empty());
        assert_eq!(swaps(&s), [(v(1), v(3))].into());
        assert_eq!(s.missing_count(v(3)), 1);
        assert_eq!(s.missing_witness_sum(v(3)), 1);

        s.swap(v(1), v(3));
        assert_eq!(s.sorted_members(), vec![v(2), v(3)]);
        assert_eq!(s.weight(), 7);
        assert_eq!(swaps(&s), [(v(3), v(1))].into());

        let mut t = CliqueState::new(&g);
        t.add(v(1));
        t.add(v(2));
        t.drop(v(1));
        assert_eq!(adds(&t), [v(1), v(3)].into());
    }

    #[test]
    #[should_panic]
    fn add_non_candidate_panics() {
        let g = graph("p edge 3 1\ne 1 2\n");
        let mut s = CliqueState::new(&g);
        s.add(v(1));
        s.add(v(3));
    }

    #[test]
    #[should_panic]
    fn drop_non_member_panics() {
        let g = graph("p edge 3 1\ne 1 2\n");
        let mut s = CliqueState::new(&g);
        s.drop(v(1));
    }

    #[test]
    #[should_panic]
    fn swap_non_pair_panics() {
        let g = graph("p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
        let mut s = CliqueState::new(&g);
        s.add(v(1));
        s.add(v(2));
        s.swap(v(1), v(3));
    }

    #[test]
    fn ages_track_flips() {
        let g = graph("p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
        let mut s = CliqueState::new(&g);
        assert_eq!(s.age(v(1)), 1);
        s.add(v(2));
        s.advance_step();
        s.advance_step();
        assert_eq!(s.age(v(2)), 2);
        assert_eq!(s.age(v(1)), 3);
        assert!(s.last_flip_step(v(2)) <= s.step());
    }

    #[test]
    fn random_moves_match_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (k, density) in [0.2, 0.5, 0.8, 0.95].into_iter().enumerate() {
            let g = random_graph(25, density, RandomWeights::Uniform(1, 9), k as u64);
            let mut s = CliqueState::new(&g);
            for _ in 0..3000 {
                let choice = rng.gen_range(0..3);
                if s.is_empty() || (choice == 0 && !s.add_candidates().is_empty()) {
                    if s.is_empty() {
                        s.add(v(rng.gen_range(1..=25)));
                    } else {
                        let c = s.add_candidates();
                        s.add(c[rng.gen_range(0..c.len())]);
                    }
                } else if choice == 1 && !s.swap_candidates().is_empty() {
                    let c = s.swap_candidates();
                    let (u, x) = c[rng.gen_range(0..c.len())];
                    s.swap(u, x);
                } else {
                    let m = s.members();
                    s.drop(m[rng.gen_range(0..m.len())]);
                }
                s.advance_step();
                assert_consistent(&s);
            }
        }
    }
}
