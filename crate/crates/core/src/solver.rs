//! Exact offline optimum of clique clustering.
//!
//! [`max_clique_partition`] splits the graph into connected components and
//! runs a branch-and-bound search on each. Vertices are branched in id order:
//! a vertex joins some compatible open cluster (oldest first) or opens a new
//! one. Among optimal partitions the search keeps the first one found, which
//! is the one with the lexicographically smallest cluster assignment vector.
//!
//! [`brute_force_partition`] enumerates every set partition and serves as
//! the test oracle for small graphs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::Clustering;
use crate::graph::{OrderedGraph, VertexId};

/// Largest component the bitmask search can represent.
pub const MAX_SEARCH_WIDTH: usize = 64;
/// Largest graph accepted by [`brute_force_partition`].
pub const BRUTE_FORCE_MAX: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveBudget {
    pub max_component_size: usize,
    pub node_limit: u64,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget {
            max_component_size: 20,
            node_limit: 10_000_000,
        }
    }
}

impl SolveBudget {
    pub fn new(max_component_size: usize, node_limit: u64) -> Result<Self, SolveError> {
        if max_component_size == 0 || max_component_size > MAX_SEARCH_WIDTH || node_limit == 0 {
            return Err(SolveError::InvalidBudget {
                max_component_size,
                node_limit,
            });
        }
        Ok(SolveBudget {
            max_component_size,
            node_limit,
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("connected component of {size} vertices exceeds the limit of {limit}")]
    ComponentTooLarge { size: usize, limit: usize },
    #[error("brute force handles at most {limit} vertices, got {n}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("invalid solver budget (component size {max_component_size}, node limit {node_limit})")]
    InvalidBudget { max_component_size: usize, node_limit: u64 },
}

/// An optimal (or best-found) clustering and its objective value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalResult {
    pub clustering: Clustering,
    pub value: u64,
    /// False only when the node limit cut the search short.
    pub proven_optimal: bool,
}

#[inline]
fn pairs(size: u32) -> u64 {
    let s = u64::from(size);
    s * s.saturating_sub(1) / 2
}

/// Branch-and-bound over one component given as local bitmask adjacency.
struct Search {
    adj: Vec<u64>,
    clusters: Vec<u64>,
    /// Vertices adjacent to every member of the cluster.
    common: Vec<u64>,
    assign: Vec<u8>,
    best_assign: Vec<u8>,
    best: Option<u64>,
    nodes: u64,
    limit: u64,
    exhausted: bool,
}

impl Search {
    fn new(adj: Vec<u64>, limit: u64) -> Self {
        let k = adj.len();
        Search {
            adj,
            clusters: Vec::with_capacity(k),
            common: Vec::with_capacity(k),
            assign: vec![0; k],
            best_assign: Vec::new(),
            best: None,
            nodes: 0,
            limit,
            exhausted: false,
        }
    }

    /// Upper bound on the profit still obtainable from vertices `i..`.
    ///
    /// Each remaining vertex is charged with the number of earlier vertices
    /// it could end up clustered with: the members of one compatible open
    /// cluster plus unassigned earlier neighbors adjacent to all of them.
    fn bound(&self, i: usize) -> u64 {
        let k = self.adj.len();
        let mut total = 0u64;
        for j in i + 1..k {
            let between = (1u64 << j) - (1u64 << i); // j < 64
            let loose = self.adj[j] & between;
            let mut best = loose.count_ones();
            for (c, &mask) in self.clusters.iter().enumerate() {
                if mask & !self.adj[j] == 0 {
                    let cand = mask.count_ones() + (loose & self.common[c]).count_ones();
                    best = best.max(cand);
                }
            }
            total += u64::from(best);
        }
        // Vertex i itself: it joins at most one open cluster.
        let mut first = 0;
        for &mask in &self.clusters {
            if mask & !self.adj[i] == 0 {
                first = first.max(mask.count_ones());
            }
        }
        total + u64::from(first)
    }

    fn run(&mut self, i: usize, profit: u64) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            self.exhausted = true;
            return;
        }
        if i == self.adj.len() {
            if self.best.is_none_or(|b| profit > b) {
                self.best = Some(profit);
                self.best_assign.clone_from(&self.assign);
            }
            return;
        }
        if let Some(b) = self.best {
            if profit + self.bound(i) <= b {
                return;
            }
        }
        let bit = 1u64 << i;
        for c in 0..self.clusters.len() {
            let mask = self.clusters[c];
            if mask & !self.adj[i] != 0 {
                continue;
            }
            let gain = u64::from(mask.count_ones());
            let saved_common = self.common[c];
            self.clusters[c] |= bit;
            self.common[c] &= self.adj[i];
            self.assign[i] = c as u8;
            self.run(i + 1, profit + gain);
            self.clusters[c] = mask;
            self.common[c] = saved_common;
            if self.exhausted {
                return;
            }
        }
        self.assign[i] = self.clusters.len() as u8;
        self.clusters.push(bit);
        self.common.push(self.adj[i]);
        self.run(i + 1, profit);
        self.clusters.pop();
        self.common.pop();
    }
}

fn local_adjacency(graph: &OrderedGraph, vs: &[VertexId]) -> Vec<u64> {
    vs.iter()
        .map(|&u| {
            vs.iter()
                .enumerate()
                .filter(|(_, &w)| graph.is_adjacent(u, w))
                .fold(0u64, |m, (j, _)| m | (1 << j))
        })
        .collect()
}

fn groups_from_assignment(vs: &[VertexId], assign: &[u8]) -> Vec<Vec<VertexId>> {
    let count = assign.iter().map(|&a| a as usize + 1).max().unwrap_or(0);
    let mut groups = vec![Vec::new(); count];
    for (&v, &a) in vs.iter().zip(assign) {
        groups[a as usize].push(v);
    }
    groups
}

/// Optimal clustering of the connected vertex set `vs` (sorted ascending).
/// Returns the groups, their profit, whether optimality was proven, and the
/// number of search nodes used.
fn solve_component(graph: &OrderedGraph, vs: &[VertexId], limit: u64) -> (Vec<Vec<VertexId>>, u64, bool, u64) {
    if vs.len() == 1 {
        return (vec![vs.to_vec()], 0, true, 1);
    }
    let adj = local_adjacency(graph, vs);
    let full = if vs.len() == 64 {
        u64::MAX
    } else {
        (1u64 << vs.len()) - 1
    };
    if adj.iter().enumerate().all(|(i, &m)| m == full & !(1 << i)) {
        // Complete component.
        return (vec![vs.to_vec()], pairs(vs.len() as u32), true, 1);
    }
    let mut search = Search::new(adj, limit.max(1));
    search.run(0, 0);
    let nodes = search.nodes;
    match search.best {
        Some(value) => (
            groups_from_assignment(vs, &search.best_assign),
            value,
            !search.exhausted,
            nodes,
        ),
        None => (vs.iter().map(|&v| vec![v]).collect(), 0, false, nodes),
    }
}

/// Maximum-profit clique partition.
///
/// Components are solved independently and their optima summed. Errors if a
/// component is larger than `budget.max_component_size`. When the node limit
/// (shared by all components) runs out the best partition found so far is
/// returned with `proven_optimal == false`.
pub fn max_clique_partition(graph: &OrderedGraph, budget: SolveBudget) -> Result<OptimalResult, SolveError> {
    let budget = SolveBudget::new(budget.max_component_size, budget.node_limit)?;
    let components = graph.components();
    if let Some(big) = components.iter().find(|c| c.len() > budget.max_component_size) {
        return Err(SolveError::ComponentTooLarge {
            size: big.len(),
            limit: budget.max_component_size,
        });
    }
    let mut remaining = budget.node_limit;
    let mut proven = true;
    let mut value = 0;
    let mut groups = Vec::new();
    for comp in &components {
        let (g, v, ok, used) = solve_component(graph, comp, remaining);
        remaining = remaining.saturating_sub(used);
        proven &= ok;
        value += v;
        groups.extend(g);
    }
    groups.sort_unstable_by_key(|g| g[0]);
    let clustering = Clustering::from_groups(groups).expect("components are disjoint");
    Ok(OptimalResult {
        clustering,
        value,
        proven_optimal: proven,
    })
}

/// Minimum-cost clique partition; same partition as the maximum-profit one,
/// value reported as `|E| - profit`.
pub fn min_cost_partition(graph: &OrderedGraph, budget: SolveBudget) -> Result<OptimalResult, SolveError> {
    let mut result = max_clique_partition(graph, budget)?;
    result.value = graph.edge_count() as u64 - result.value;
    Ok(result)
}

/// Enumerates all set partitions of a graph with at most
/// [`BRUTE_FORCE_MAX`] vertices and keeps the best clique partition (first
/// in restricted-growth order among ties).
pub fn brute_force_partition(graph: &OrderedGraph) -> Result<OptimalResult, SolveError> {
    let n = graph.vertex_count();
    if n > BRUTE_FORCE_MAX {
        return Err(SolveError::TooManyVertices {
            n,
            limit: BRUTE_FORCE_MAX,
        });
    }
    let all: Vec<VertexId> = graph.vertices().collect();
    let adj = local_adjacency(graph, &all);
    let mut best: Option<(u64, Vec<u8>)> = None;
    let mut rgs = vec![0u8; n];
    let mut masks = [0u64; BRUTE_FORCE_MAX];
    loop {
        masks.iter_mut().for_each(|m| *m = 0);
        for (i, &a) in rgs.iter().enumerate() {
            masks[a as usize] |= 1 << i;
        }
        let feasible = (0..n).all(|i| {
            let mine = masks[rgs[i] as usize] & !(1 << i);
            mine & !adj[i] == 0
        });
        if feasible {
            let profit: u64 = masks.iter().map(|m| pairs(m.count_ones())).sum();
            if best.as_ref().is_none_or(|(b, _)| profit > *b) {
                best = Some((profit, rgs.clone()));
            }
        }
        if !next_rgs(&mut rgs) {
            break;
        }
    }
    let (value, assign) = best.unwrap_or((0, Vec::new()));
    let clustering = Clustering::from_groups(groups_from_assignment(&all, &assign)).expect("assignment is a partition");
    Ok(OptimalResult {
        clustering,
        value,
        proven_optimal: true,
    })
}

/// Advances a restricted-growth string; false after the last one.
fn next_rgs(rgs: &mut [u8]) -> bool {
    let n = rgs.len();
    for i in (1..n).rev() {
        let cap = rgs[..i].iter().copied().max().unwrap_or(0) + 1;
        if rgs[i] < cap {
            rgs[i] += 1;
            rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> OrderedGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        OrderedGraph::from_edges(n, &edges).unwrap()
    }

    fn complete(n: usize) -> OrderedGraph {
        let edges: Vec<_> = (0..n).flat_map(|b| (0..b).map(move |a| (a, b))).collect();
        OrderedGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn rgs_counts_are_bell_numbers() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            let mut rgs = vec![0u8; n];
            let mut count = 1;
            while next_rgs(&mut rgs) {
                count += 1;
            }
            assert_eq!(count, bell, "n = {n}");
        }
    }

    #[test]
    fn small_examples() {
        let p3 = OrderedGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let budget = SolveBudget::default();
        assert_eq!(max_clique_partition(&p3, budget).unwrap().value, 1);
        assert_eq!(brute_force_partition(&p3).unwrap().value, 1);

        let k4 = complete(4);
        let r = max_clique_partition(&k4, budget).unwrap();
        assert_eq!((r.value, r.clustering.len()), (6, 1));
        assert_eq!(min_cost_partition(&k4, budget).unwrap().value, 0);

        let c5 = cycle(5);
        assert_eq!(brute_force_partition(&c5).unwrap().value, 2);
        assert_eq!(max_clique_partition(&c5, budget).unwrap().value, 2);
        assert_eq!(min_cost_partition(&c5, budget).unwrap().value, 3);

        let edge = OrderedGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(brute_force_partition(&edge).unwrap().value, 1);
        let two = OrderedGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(brute_force_partition(&two).unwrap().value, 2);
    }

    #[test]
    fn ties_resolve_to_smallest_assignment() {
        // P3: {0,1},{2} beats {0},{1,2} lexicographically.
        let p3 = OrderedGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let bb = max_clique_partition(&p3, SolveBudget::default()).unwrap();
        let bf = brute_force_partition(&p3).unwrap();
        assert_eq!(bb.clustering.assignment_vector(), vec![0, 0, 1]);
        assert_eq!(bb.clustering, bf.clustering);
    }

    #[test]
    fn rejects_large_components_and_graphs() {
        let big = cycle(21);
        assert_eq!(
            max_clique_partition(&big, SolveBudget::default()),
            Err(SolveError::ComponentTooLarge { size: 21, limit: 20 })
        );
        assert!(matches!(
            brute_force_partition(&cycle(11)),
            Err(SolveError::TooManyVertices { n: 11, .. })
        ));
        assert!(SolveBudget::new(0, 5).is_err());
        assert!(SolveBudget::new(65, 5).is_err());
    }

    #[test]
    fn node_limit_is_soft() {
        let g = cycle(20);
        let r = max_clique_partition(&g, SolveBudget::new(20, 25).unwrap()).unwrap();
        assert!(!r.proven_optimal);
        r.clustering.validate(&g).unwrap();
        assert_eq!(r.value, r.clustering.profit());
    }

    #[test]
    fn empty_graph() {
        let g = OrderedGraph::new();
        let r = max_clique_partition(&g, SolveBudget::default()).unwrap();
        assert_eq!((r.value, r.clustering.len()), (0, 0));
        assert_eq!(brute_force_partition(&g).unwrap().value, 0);
    }
}
