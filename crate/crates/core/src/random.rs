//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::OrderedGraph;

/// Edge probabilities used by the verification suites.
pub const EDGE_PROBABILITIES: [f64; 3] = [0.2, 0.5, 0.8];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, p)` with vertices arriving in id order.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> OrderedGraph {
    let mut edges = Vec::new();
    for b in 1..n {
        for a in 0..b {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    OrderedGraph::from_edges(n, &edges).expect("generated edges are in range")
}

/// The same graph with its vertices arriving in a different order.
pub fn permuted(graph: &OrderedGraph, order: &[usize]) -> OrderedGraph {
    let mut position = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let edges: Vec<(usize, usize)> = graph
        .edge_list()
        .into_iter()
        .map(|(a, b)| (position[a], position[b]))
        .collect();
    OrderedGraph::from_edges(graph.vertex_count(), &edges).expect("permutation preserves range")
}

/// `graph` under a uniformly random arrival order.
pub fn shuffled<R: Rng + ?Sized>(graph: &OrderedGraph, rng: &mut R) -> OrderedGraph {
    let mut order: Vec<usize> = (0..graph.vertex_count()).collect();
    order.shuffle(rng);
    permuted(graph, &order)
}

/// Disjoint union of cliques with the given sizes, in random arrival order.
pub fn disjoint_cliques<R: Rng + ?Sized>(sizes: &[usize], rng: &mut R) -> OrderedGraph {
    let n = sizes.iter().sum();
    let mut edges = Vec::new();
    let mut start = 0;
    for &s in sizes {
        for b in start..start + s {
            for a in start..b {
                edges.push((a, b));
            }
        }
        start += s;
    }
    let g = OrderedGraph::from_edges(n, &edges).expect("clique edges are in range");
    shuffled(&g, rng)
}

/// Random composition of `n` into clique sizes.
pub fn random_partition_sizes<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    sizes
}
