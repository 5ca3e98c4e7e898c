//! Vertex-weighted undirected graphs.
//!
//! Vertices are numbered `1..=n` on every public surface. Each edge carries an
//! integer id in `0..m`; both adjacency entries of an edge hold the same id, so
//! code walking a neighborhood gets the id of the edge it crossed for free.

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest weight sum accepted at load time; keeps all clique arithmetic inside `i64`.
pub const MAX_TOTAL_WEIGHT: u64 = i64::MAX as u64;

/// A vertex, identified by its 1-based index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    /// Panics if `index` is zero or does not fit in 32 bits.
    pub fn new(index: usize) -> Self {
        assert!(index >= 1, "vertex indices are 1-based");
        VertexId(u32::try_from(index).expect("vertex index exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 0-based storage position.
    #[inline]
    pub(crate) fn slot(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub(crate) fn from_slot(slot: usize) -> Self {
        VertexId(slot as u32 + 1)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// One adjacency entry: the neighbor and the id of the connecting edge.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Adjacent {
    pub vertex: VertexId,
    pub edge: u32,
}

/// How vertex weights are obtained when loading an instance.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum WeightMode {
    /// `w(v_i) = (i mod 200) + 1`, the usual rule for unweighted benchmarks.
    Mod200,
    /// Every vertex must have a `v i w` line.
    FromFile,
    /// `FromFile` if the text contains any `v` line, `Mod200` otherwise.
    Auto,
}

/// `(i mod 200) + 1`.
#[inline]
pub fn mod200_weight(index: usize) -> u64 {
    (index % 200) as u64 + 1
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed header `{text}`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: `{text}` appears before the `p` header")]
    BeforeHeader { line: usize, text: String },
    #[error("line {line}: duplicate `p` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: malformed line `{text}`")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: endpoint {vertex} out of range 1..={n}")]
    EndpointOutOfRange { line: usize, vertex: u64, n: usize },
    #[error("line {line}: weight given for unknown vertex {vertex} (n = {n})")]
    UnknownWeightVertex { line: usize, vertex: u64, n: usize },
    #[error("vertex {0} has no weight line")]
    MissingWeight(usize),
    #[error("no `p` header found")]
    MissingHeader,
    #[error("sum of vertex weights exceeds {MAX_TOTAL_WEIGHT}")]
    WeightOverflow,
    #[error("vertex count {0} is too large")]
    TooManyVertices(u64),
}

/// Diagnostics collected while building a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
    pub weights_from_file: bool,
}

/// Immutable vertex-weighted undirected graph stored in compressed rows.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    weights: Vec<u64>,
    offsets: Vec<usize>,
    // Sorted by neighbor index within each row.
    entries: Vec<Adjacent>,
    // endpoints[e] = (smaller, larger)
    endpoints: Vec<(VertexId, VertexId)>,
    total_weight: u64,
}

impl WeightedGraph {
    /// Builds a graph from 1-based edge endpoints. Edge ids follow the order of
    /// first appearance; duplicates and self-loops are dropped and counted.
    pub fn from_edges(
        weights: Vec<u64>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(Self, LoadReport), GraphError> {
        let n = weights.len();
        if n >= u32::MAX as usize {
            return Err(GraphError::TooManyVertices(n as u64));
        }
        let mut total: u64 = 0;
        for &w in &weights {
            total = total.checked_add(w).ok_or(GraphError::WeightOverflow)?;
        }
        if total > MAX_TOTAL_WEIGHT {
            return Err(GraphError::WeightOverflow);
        }

        let mut report = LoadReport::default();
        let mut seen = HashSet::new();
        let mut endpoints = Vec::new();
        for (a, b) in edges {
            assert!(
                (1..=n).contains(&a) && (1..=n).contains(&b),
                "edge endpoint out of range"
            );
            if a == b {
                report.self_loops += 1;
                continue;
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                report.duplicate_edges += 1;
                continue;
            }
            endpoints.push((VertexId::new(key.0), VertexId::new(key.1)));
        }

        let mut degree = vec![0usize; n];
        for &(a, b) in &endpoints {
            degree[a.slot()] += 1;
            degree[b.slot()] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let placeholder = Adjacent {
            vertex: VertexId(1),
            edge: 0,
        };
        let mut entries = vec![placeholder; offsets[n]];
        for (id, &(a, b)) in endpoints.iter().enumerate() {
            let id = u32::try_from(id).expect("edge count exceeds u32");
            entries[fill[a.slot()]] = Adjacent {
                vertex: b,
                edge: id,
            };
            fill[a.slot()] += 1;
            entries[fill[b.slot()]] = Adjacent {
                vertex: a,
                edge: id,
            };
            fill[b.slot()] += 1;
        }
        for s in 0..n {
            entries[offsets[s]..offsets[s + 1]].sort_unstable_by_key(|a| a.vertex);
        }

        Ok((
            WeightedGraph {
                weights,
                offsets,
                entries,
                endpoints,
                total_weight: total,
            },
            report,
        ))
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + Clone {
        (0..self.weights.len()).map(VertexId::from_slot)
    }

    #[inline]
    pub fn weight(&self, v: VertexId) -> u64 {
        self.weights[v.slot()]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[Adjacent] {
        let s = v.slot();
        &self.entries[self.offsets[s]..self.offsets[s + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let s = v.slot();
        self.offsets[s + 1] - self.offsets[s]
    }

    /// Edge id of `{u, v}`, or `None` when they are not adjacent.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<u32> {
        let (probe, target) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        let row = self.neighbors(probe);
        row.binary_search_by_key(&target, |a| a.vertex)
            .ok()
            .map(|i| row[i].edge)
    }

    /// Edge id of `{u, v}`. The pair must be adjacent.
    pub fn edge_id(&self, u: VertexId, v: VertexId) -> u32 {
        match self.find_edge(u, v) {
            Some(e) => e,
            None => panic!("{u} and {v} are not adjacent"),
        }
    }

    #[inline]
    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.find_edge(u, v).is_some()
    }

    /// Endpoints of edge `id`, smaller index first.
    pub fn edge_endpoints(&self, id: u32) -> (VertexId, VertexId) {
        self.endpoints[id as usize]
    }

    /// Edges in id order.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.endpoints
    }

    /// True when every pair of `set` is adjacent and no vertex repeats.
    pub fn is_clique(&self, set: &[VertexId]) -> bool {
        self.first_non_adjacent_pair(set).is_none()
    }

    /// First pair (in input order) that breaks the clique property; a repeated
    /// vertex is reported as `(v, v)`.
    pub fn first_non_adjacent_pair(&self, set: &[VertexId]) -> Option<(VertexId, VertexId)> {
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                if a == b || !self.is_adjacent(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn set_weight(&self, set: &[VertexId]) -> u64 {
        set.iter().map(|&v| self.weight(v)).sum()
    }

    /// Same vertices and weights, complementary edge set. Edge ids are assigned
    /// in lexicographic `(i, j)` order with `i < j`.
    pub fn complement(&self) -> WeightedGraph {
        let n = self.vertex_count();
        let mut edges = Vec::new();
        let mut mark = vec![false; n];
        for u in self.vertices() {
            for a in self.neighbors(u) {
                mark[a.vertex.slot()] = true;
            }
            for j in u.index() + 1..=n {
                if !mark[j - 1] {
                    edges.push((u.index(), j));
                }
            }
            for a in self.neighbors(u) {
                mark[a.vertex.slot()] = false;
            }
        }
        WeightedGraph::from_edges(self.weights.clone(), edges)
            .expect("weights were validated on construction")
            .0
    }

    /// Writes the graph as DIMACS text with one `v i w` line per vertex.
    pub fn write_dimacs<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "p edge {} {}", self.vertex_count(), self.edge_count())?;
        for v in self.vertices() {
            writeln!(out, "v {} {}", v.index(), self.weight(v))?;
        }
        for &(a, b) in &self.endpoints {
            writeln!(out, "e {} {}", a.index(), b.index())?;
        }
        Ok(())
    }
}

/// Parses DIMACS ascii (`c`, `p edge n m`, `e u v`, optional `v i w`).
pub fn parse_instance<R: BufRead>(
    reader: R,
    mode: WeightMode,
) -> Result<(WeightedGraph, LoadReport), GraphError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut file_weights: Vec<Option<u64>> = Vec::new();
    let mut saw_weight_line = false;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let text = line.trim();
        let mut fields = text.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        let malformed = || GraphError::MalformedLine {
            line: lineno,
            text: text.to_string(),
        };
        match tag {
            "c" => {}
            "p" => {
                if n.is_some() {
                    return Err(GraphError::DuplicateHeader { line: lineno });
                }
                let bad = || GraphError::MalformedHeader {
                    line: lineno,
                    text: text.to_string(),
                };
                let _format = fields.next().ok_or_else(bad)?;
                let nv: u64 = fields.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                let _m: u64 = fields.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                if nv >= u32::MAX as u64 {
                    return Err(GraphError::TooManyVertices(nv));
                }
                n = Some(nv as usize);
                file_weights = vec![None; nv as usize];
            }
            "e" | "v" => {
                let Some(nv) = n else {
                    return Err(GraphError::BeforeHeader {
                        line: lineno,
                        text: text.to_string(),
                    });
                };
                let a: u64 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(malformed)?;
                let b: u64 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(malformed)?;
                if tag == "e" {
                    for x in [a, b] {
                        if x == 0 || x > nv as u64 {
                            return Err(GraphError::EndpointOutOfRange {
                                line: lineno,
                                vertex: x,
                                n: nv,
                            });
                        }
                    }
                    edges.push((a as usize, b as usize));
                } else {
                    if a == 0 || a > nv as u64 {
                        return Err(GraphError::UnknownWeightVertex {
                            line: lineno,
                            vertex: a,
                            n: nv,
                        });
                    }
                    saw_weight_line = true;
                    file_weights[a as usize - 1] = Some(b);
                }
            }
            _ => return Err(malformed()),
        }
    }

    let n = n.ok_or(GraphError::MissingHeader)?;
    let use_file = match mode {
        WeightMode::Mod200 => false,
        WeightMode::FromFile => true,
        WeightMode::Auto => saw_weight_line,
    };
    let weights = if use_file {
        file_weights
            .iter()
            .enumerate()
            .map(|(s, w)| w.ok_or(GraphError::MissingWeight(s + 1)))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        (1..=n).map(mod200_weight).collect()
    };
    let (graph, mut report) = WeightedGraph::from_edges(weights, edges)?;
    report.weights_from_file = use_file;
    Ok((graph, report))
}

/// Convenience wrapper for in-memory text.
pub fn parse_str(text: &str, mode: WeightMode) -> Result<(WeightedGraph, LoadReport), GraphError> {
    parse_instance(text.as_bytes(), mode)
}

/// How a generated graph is weighted.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RandomWeights {
    Mod200,
    /// Uniform integers in the inclusive range.
    Uniform(u64, u64),
}

/// G(n, p) random graph. Edges are drawn in lexicographic pair order, so ids
/// follow that order too.
pub fn random_graph(n: usize, density: f64, weights: RandomWeights, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<u64> = match weights {
        RandomWeights::Mod200 => (1..=n).map(mod200_weight).collect(),
        RandomWeights::Uniform(lo, hi) => (0..n).map(|_| rng.gen_range(lo..=hi)).collect(),
    };
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    WeightedGraph::from_edges(w, edges)
        .expect("generated weights are small")
        .0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> WeightedGraph {
        parse_str("p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n", WeightMode::Mod200)
            .unwrap()
            .0
    }

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    #[test]
    fn triangle_weights_and_ids() {
        let g = k3();
        assert_eq!(g.weights(), &[2, 3, 4]);
        assert_eq!(g.edge_id(v(1), v(2)), 0);
        assert_eq!(g.edge_id(v(1), v(3)), 1);
        assert_eq!(g.edge_id(v(3), v(1)), 1);
        assert_eq!(g.edge_id(v(2), v(3)), 2);
    }

    #[test]
    fn mod200_boundaries() {
        assert_eq!(mod200_weight(1), 2);
        assert_eq!(mod200_weight(199), 200);
        assert_eq!(mod200_weight(200), 1);
        assert_eq!(mod200_weight(201), 2);
    }

    #[test]
    fn single_vertex_no_edges() {
        let (g, _) = parse_str("p edge 1 0\n", WeightMode::Mod200).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.weight(v(1)), 2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "c hello\n\nc x\np col 2 1\ne 1 2\n";
        let (g, _) = parse_str(text, WeightMode::Mod200).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn duplicates_and_loops_are_counted() {
        let text = "p edge 3 5\ne 1 2\ne 2 1\ne 2 2\ne 2 3\ne 1 2\n";
        let (g, r) = parse_str(text, WeightMode::Mod200).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(r.duplicate_edges, 2);
        assert_eq!(r.self_loops, 1);
        assert_eq!(g.edge_id(v(2), v(3)), 1);
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("p edge x 1\n", "malformed header"),
            ("e 1 2\np edge 2 1\n", "before"),
            ("p edge 2 1\ne 1 3\n", "out of range"),
            ("p edge 2 1\ne 0 1\n", "out of range"),
            ("p edge 2 0\nv 3 5\n", "unknown vertex"),
            ("p edge 2 1\ne 1\n", "malformed line"),
            ("c only\n", "no `p` header"),
            ("p edge 2 0\np edge 2 0\n", "duplicate"),
        ];
        for (text, needle) in cases {
            let err = parse_str(text, WeightMode::Mod200).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn file_weights() {
        let text = "p edge 2 1\nv 1 7\nv 2 9\ne 1 2\n";
        let (g, r) = parse_str(text, WeightMode::Auto).unwrap();
        assert!(r.weights_from_file);
        assert_eq!(g.weights(), &[7, 9]);
        let (g, r) = parse_str(text, WeightMode::Mod200).unwrap();
        assert!(!r.weights_from_file);
        assert_eq!(g.weights(), &[2, 3]);

        let missing = "p edge 2 1\nv 1 7\ne 1 2\n";
        let err = parse_str(missing, WeightMode::FromFile).unwrap_err();
        assert!(matches!(err, GraphError::MissingWeight(2)));
        let none = "p edge 2 1\ne 1 2\n";
        assert!(parse_str(none, WeightMode::FromFile).is_err());
        assert!(
            !parse_str(none, WeightMode::Auto)
                .unwrap()
                .1
                .weights_from_file
        );
    }

    #[test]
    fn weight_sum_must_fit_63_bits() {
        let text = format!("p edge 2 0\nv 1 {}\nv 2 1\n", i64::MAX);
        assert!(matches!(
            parse_str(&text, WeightMode::FromFile),
            Err(GraphError::WeightOverflow)
        ));
        let text = format!("p edge 2 0\nv 1 {}\nv 2 0\n", i64::MAX);
        assert!(parse_str(&text, WeightMode::FromFile).is_ok());
    }

    #[test]
    fn complement_small_cases() {
        let g = k3();
        assert_eq!(g.complement().edge_count(), 0);

        let (empty, _) = parse_str("p edge 3 0\n", WeightMode::Mod200).unwrap();
        let c = empty.complement();
        assert_eq!(c.edge_count(), 3);
        assert_eq!(c.edge_id(v(1), v(2)), 0);
        assert_eq!(c.edge_id(v(1), v(3)), 1);
        assert_eq!(c.edge_id(v(2), v(3)), 2);

        let (p3, _) = parse_str("p edge 3 2\ne 1 2\ne 2 3\n", WeightMode::Mod200).unwrap();
        let c = p3.complement();
        assert_eq!(c.edges(), &[(v(1), v(3))]);
        assert_eq!(c.weights(), p3.weights());
    }

    #[test]
    fn write_then_parse() {
        let g = random_graph(12, 0.4, RandomWeights::Uniform(1, 50), 9);
        let mut buf = Vec::new();
        g.write_dimacs(&mut buf).unwrap();
        let (h, r) = parse_instance(buf.as_slice(), WeightMode::Auto).unwrap();
        assert!(r.weights_from_file);
        assert_eq!(g.weights(), h.weights());
        assert_eq!(g.edges(), h.edges());
    }

    #[test]
    fn clique_checks() {
        let g = k3();
        assert!(g.is_clique(&[v(1), v(2), v(3)]));
        assert!(!g.is_clique(&[v(1), v(1)]));
        let (p3, _) = parse_str("p edge 3 2\ne 1 2\ne 2 3\n", WeightMode::Mod200).unwrap();
        assert_eq!(
            p3.first_non_adjacent_pair(&[v(1), v(2), v(3)]),
            Some((v(1), v(3)))
        );
    }
}
