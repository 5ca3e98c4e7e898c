//! Inputs shared by the criterion benchmarks under `benches/`.

use mwc_core::{random_graph, RandomWeights, WeightedGraph};

/// Random graph on `n` vertices with expected degree close to `degree`.
pub fn graph_with_degree(n: usize, degree: usize, seed: u64) -> WeightedGraph {
    let density = (degree as f64 / (n - 1) as f64).min(1.0);
    random_graph(n, density, RandomWeights::Mod200, seed)
}

/// The vertex whose degree is closest to `degree`.
pub fn vertex_near_degree(g: &WeightedGraph, degree: usize) -> mwc_core::VertexId {
    g.vertices()
        .min_by_key(|&v| g.degree(v).abs_diff(degree))
        .expect("graph has vertices")
}
