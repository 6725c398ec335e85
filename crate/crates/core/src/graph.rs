//! Vertex-arrival graphs.
//!
//! Vertices are numbered densely in arrival order. When a vertex arrives all
//! of its edges to earlier vertices are revealed at once, so a graph is fully
//! described by its sequence of [`ArrivalEvent`]s.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arrival position of a vertex, 0-based.
///
/// Human-facing output (instance files, reports, `Display`) renders ids
/// 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn new(index: usize) -> Self {
        VertexId(u32::try_from(index).expect("vertex index exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based label.
    #[inline]
    pub fn label(self) -> u64 {
        u64::from(self.0) + 1
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// One online step: a new vertex and its edges to already revealed vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrivalEvent {
    pub vertex: VertexId,
    pub back_neighbors: Vec<VertexId>,
}

impl ArrivalEvent {
    /// Builds an event with a sorted, deduplicated neighbor list.
    pub fn new(vertex: VertexId, back_neighbors: impl IntoIterator<Item = VertexId>) -> Self {
        let mut back_neighbors: Vec<VertexId> = back_neighbors.into_iter().collect();
        back_neighbors.sort_unstable();
        back_neighbors.dedup();
        ArrivalEvent { vertex, back_neighbors }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {got} arrived out of order, expected vertex {expected}")]
    OutOfOrder { expected: VertexId, got: VertexId },
    #[error("vertex {vertex} lists neighbor {neighbor}, which has not arrived before it")]
    ForwardNeighbor { vertex: VertexId, neighbor: VertexId },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
}

/// Undirected simple graph whose vertices carry their arrival order.
///
/// Adjacency is one growable bitset per vertex, kept symmetric.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderedGraph {
    adjacency: Vec<FixedBitSet>,
    edges: usize,
}

impl OrderedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replays a sequence of arrivals.
    pub fn from_events<'a>(events: impl IntoIterator<Item = &'a ArrivalEvent>) -> Result<Self, GraphError> {
        let mut graph = OrderedGraph::new();
        for event in events {
            graph.add_vertex(event)?;
        }
        Ok(graph)
    }

    /// Builds a graph on `n` vertices from 0-based edge pairs in any orientation.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut back: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(VertexId::new(a)));
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if hi >= n {
                return Err(GraphError::UnknownVertex(VertexId::new(hi)));
            }
            back[hi].push(VertexId::new(lo));
        }
        let mut graph = OrderedGraph::new();
        for (i, nbrs) in back.into_iter().enumerate() {
            graph.add_vertex(&ArrivalEvent::new(VertexId::new(i), nbrs))?;
        }
        Ok(graph)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).map(VertexId::new)
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.vertex_count()
    }

    /// Reveals the next vertex.
    pub fn add_vertex(&mut self, event: &ArrivalEvent) -> Result<(), GraphError> {
        let n = self.vertex_count();
        if event.vertex.index() != n {
            return Err(GraphError::OutOfOrder {
                expected: VertexId::new(n),
                got: event.vertex,
            });
        }
        if let Some(&bad) = event.back_neighbors.iter().find(|u| u.index() >= n) {
            return Err(GraphError::ForwardNeighbor {
                vertex: event.vertex,
                neighbor: bad,
            });
        }
        let mut own = FixedBitSet::with_capacity(n + 1);
        for &u in &event.back_neighbors {
            if own.put(u.index()) {
                continue;
            }
            let row = &mut self.adjacency[u.index()];
            row.grow(n + 1);
            row.insert(n);
            self.edges += 1;
        }
        self.adjacency.push(own);
        Ok(())
    }

    /// Convenience wrapper around [`add_vertex`](Self::add_vertex).
    pub fn push_vertex(&mut self, back_neighbors: &[VertexId]) -> Result<VertexId, GraphError> {
        let v = VertexId::new(self.vertex_count());
        self.add_vertex(&ArrivalEvent::new(v, back_neighbors.iter().copied()))?;
        Ok(v)
    }

    #[inline]
    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency.get(u.index()).is_some_and(|row| row.contains(v.index()))
    }

    pub fn neighbor_set(&self, v: VertexId) -> &FixedBitSet {
        &self.adjacency[v.index()]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v.index()].ones().map(VertexId::new)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.index()].count_ones(..)
    }

    /// Neighbors that arrived before `v`, ascending.
    pub fn back_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.adjacency[v.index()]
            .ones()
            .take_while(|&u| u < v.index())
            .map(VertexId::new)
            .collect()
    }

    pub fn is_clique(&self, vs: &[VertexId]) -> Result<bool, GraphError> {
        if let Some(&bad) = vs.iter().find(|v| !self.contains(**v)) {
            return Err(GraphError::UnknownVertex(bad));
        }
        Ok(self.all_adjacent(vs))
    }

    /// Unchecked clique test; callers guarantee the vertices exist.
    pub(crate) fn all_adjacent(&self, vs: &[VertexId]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&w| self.is_adjacent(u, w)))
    }

    /// Subgraph induced by `vs`, relabelled so that `vs[i]` becomes vertex `i`.
    pub fn induced(&self, vs: &[VertexId]) -> OrderedGraph {
        let mut sub = OrderedGraph::new();
        for (i, &v) in vs.iter().enumerate() {
            let back = (0..i).filter(|&j| self.is_adjacent(vs[j], v)).map(VertexId::new);
            sub.add_vertex(&ArrivalEvent::new(VertexId::new(i), back))
                .expect("induced arrivals are ordered");
        }
        sub
    }

    /// Connected components of the subgraph induced by `subset`, each sorted
    /// ascending, ordered by smallest member.
    pub fn components_within(&self, subset: &[VertexId]) -> Vec<Vec<VertexId>> {
        let mut inside = FixedBitSet::with_capacity(self.vertex_count());
        for v in subset {
            inside.insert(v.index());
        }
        let mut seen = FixedBitSet::with_capacity(self.vertex_count());
        let mut order: Vec<VertexId> = subset.to_vec();
        order.sort_unstable();
        let mut out = Vec::new();
        for start in order {
            if seen.put(start.index()) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for w in self.adjacency[u.index()].ones() {
                    if inside.contains(w) && !seen.put(w) {
                        comp.push(VertexId::new(w));
                        stack.push(VertexId::new(w));
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let all: Vec<VertexId> = self.vertices().collect();
        self.components_within(&all)
    }

    /// The arrival sequence that rebuilds this graph.
    pub fn events(&self) -> Vec<ArrivalEvent> {
        self.vertices()
            .map(|v| ArrivalEvent {
                vertex: v,
                back_neighbors: self.back_neighbors(v),
            })
            .collect()
    }

    /// Edge list as 0-based `(lower, higher)` pairs.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for v in self.vertices() {
            for u in self.back_neighbors(v) {
                out.push((u.index(), v.index()));
            }
        }
        out
    }
}
