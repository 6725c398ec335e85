//! Merge-only clique clusterings and the profit/cost objectives.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{OrderedGraph, VertexId};

/// Cluster handle. Ids are handed out in creation order and never reused; a
/// merge keeps the older of the two ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClusterId(pub u32);

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClusterError {
    #[error("vertex {0} is already clustered")]
    AlreadyClustered(VertexId),
    #[error("vertex {0} is not clustered")]
    Unclustered(VertexId),
    #[error("unknown cluster {0}")]
    UnknownCluster(ClusterId),
    #[error("cannot merge cluster {0} with itself")]
    SelfMerge(ClusterId),
    #[error("merging {0} and {1} would not induce a clique")]
    NotAClique(ClusterId, ClusterId),
    #[error("cluster {0} does not induce a clique")]
    InvalidCluster(ClusterId),
    #[error("vertex {0} is not a vertex of the graph")]
    UnknownVertex(VertexId),
    #[error("clusters cover {covered} vertices but the graph has {expected}")]
    Coverage { covered: usize, expected: usize },
    #[error("empty cluster in input")]
    EmptyCluster,
}

/// A partition of the revealed vertices into cliques.
///
/// Only two mutations exist: [`singleton`](Clustering::singleton) for a new
/// vertex and [`merge`](Clustering::merge) of two clusters whose union is a
/// clique. The clique property of a single merge is checked eagerly; whole
/// clusterings built in bulk go through [`validate`](Clustering::validate).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Clustering {
    clusters: Vec<Option<Vec<VertexId>>>,
    owner: Vec<Option<ClusterId>>,
    live: usize,
    profit: u64,
}

#[inline]
fn pairs(size: usize) -> u64 {
    let s = size as u64;
    s * s.saturating_sub(1) / 2
}

impl Clustering {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a clustering from disjoint groups. Clique-ness is not checked.
    pub fn from_groups<I, G>(groups: I) -> Result<Self, ClusterError>
    where
        I: IntoIterator<Item = G>,
        G: IntoIterator<Item = VertexId>,
    {
        let mut out = Clustering::new();
        for group in groups {
            let mut members: Vec<VertexId> = group.into_iter().collect();
            if members.is_empty() {
                return Err(ClusterError::EmptyCluster);
            }
            members.sort_unstable();
            let id = ClusterId(out.clusters.len() as u32);
            for &v in &members {
                out.claim(v, id)?;
            }
            out.profit += pairs(members.len());
            out.clusters.push(Some(members));
            out.live += 1;
        }
        Ok(out)
    }

    fn claim(&mut self, v: VertexId, id: ClusterId) -> Result<(), ClusterError> {
        if self.owner.len() <= v.index() {
            self.owner.resize(v.index() + 1, None);
        }
        match self.owner[v.index()] {
            Some(_) => Err(ClusterError::AlreadyClustered(v)),
            None => {
                self.owner[v.index()] = Some(id);
                Ok(())
            }
        }
    }

    /// Opens the cluster `{v}`.
    pub fn singleton(&mut self, v: VertexId) -> Result<ClusterId, ClusterError> {
        let id = ClusterId(self.clusters.len() as u32);
        self.claim(v, id)?;
        self.clusters.push(Some(vec![v]));
        self.live += 1;
        Ok(id)
    }

    /// Replaces clusters `a` and `b` by their union, which must be a clique.
    pub fn merge(&mut self, graph: &OrderedGraph, a: ClusterId, b: ClusterId) -> Result<ClusterId, ClusterError> {
        if a == b {
            return Err(ClusterError::SelfMerge(a));
        }
        let left = self.members(a).ok_or(ClusterError::UnknownCluster(a))?;
        let right = self.members(b).ok_or(ClusterError::UnknownCluster(b))?;
        if let Some(&v) = left.iter().chain(right).find(|v| !graph.contains(**v)) {
            return Err(ClusterError::UnknownVertex(v));
        }
        let compatible = left.iter().all(|&u| right.iter().all(|&w| graph.is_adjacent(u, w)));
        if !compatible {
            return Err(ClusterError::NotAClique(a, b));
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        let moved = self.clusters[gone.0 as usize].take().expect("checked above");
        let kept = self.clusters[keep.0 as usize].as_mut().expect("checked above");
        self.profit += kept.len() as u64 * moved.len() as u64;
        for &v in &moved {
            self.owner[v.index()] = Some(keep);
        }
        kept.extend(moved);
        kept.sort_unstable();
        self.live -= 1;
        Ok(keep)
    }

    /// Merges the clusters holding `u` and `v`.
    pub fn merge_vertices(
        &mut self,
        graph: &OrderedGraph,
        u: VertexId,
        v: VertexId,
    ) -> Result<ClusterId, ClusterError> {
        let a = self.cluster_of(u).ok_or(ClusterError::Unclustered(u))?;
        let b = self.cluster_of(v).ok_or(ClusterError::Unclustered(v))?;
        self.merge(graph, a, b)
    }

    #[inline]
    pub fn cluster_of(&self, v: VertexId) -> Option<ClusterId> {
        self.owner.get(v.index()).copied().flatten()
    }

    pub fn members(&self, id: ClusterId) -> Option<&[VertexId]> {
        self.clusters.get(id.0 as usize)?.as_deref()
    }

    pub fn cluster_size(&self, id: ClusterId) -> usize {
        self.members(id).map_or(0, <[VertexId]>::len)
    }

    /// Live clusters in creation order.
    pub fn iter(&self) -> impl Iterator<Item = (ClusterId, &[VertexId])> + '_ {
        self.clusters
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_deref().map(|m| (ClusterId(i as u32), m)))
    }

    /// Number of live clusters.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn clustered_count(&self) -> usize {
        self.owner.iter().filter(|o| o.is_some()).count()
    }

    pub fn co_clustered(&self, u: VertexId, v: VertexId) -> bool {
        matches!((self.cluster_of(u), self.cluster_of(v)), (Some(a), Some(b)) if a == b)
    }

    /// Number of edges inside clusters, `sum |C| (|C| - 1) / 2`.
    #[inline]
    pub fn profit(&self) -> u64 {
        self.profit
    }

    /// Number of graph edges outside clusters.
    pub fn cost(&self, graph: &OrderedGraph) -> u64 {
        (graph.edge_count() as u64).saturating_sub(self.profit)
    }

    /// Vertex sets sorted internally and by smallest member.
    pub fn groups(&self) -> Vec<Vec<VertexId>> {
        let mut out: Vec<Vec<VertexId>> = self.iter().map(|(_, m)| m.to_vec()).collect();
        out.sort_unstable_by_key(|g| g[0]);
        out
    }

    /// Full check: every revealed vertex in exactly one cluster, every
    /// cluster a clique.
    pub fn validate(&self, graph: &OrderedGraph) -> Result<(), ClusterError> {
        if let Some(v) = self
            .owner
            .iter()
            .enumerate()
            .skip(graph.vertex_count())
            .find_map(|(i, o)| o.map(|_| VertexId::new(i)))
        {
            return Err(ClusterError::UnknownVertex(v));
        }
        let covered = self.clustered_count();
        if covered != graph.vertex_count() {
            return Err(ClusterError::Coverage {
                covered,
                expected: graph.vertex_count(),
            });
        }
        for (id, members) in self.iter() {
            if !graph.all_adjacent(members) {
                return Err(ClusterError::InvalidCluster(id));
            }
        }
        Ok(())
    }

    /// True when every cluster of `self` lies inside one cluster of `later`,
    /// i.e. `later` only coarsened `self`.
    pub fn is_coarsened_by(&self, later: &Clustering) -> bool {
        self.iter().all(|(_, members)| {
            let first = later.cluster_of(members[0]);
            first.is_some() && members.iter().all(|&v| later.cluster_of(v) == first)
        })
    }

    /// Restricted-growth string: label of each vertex's cluster in order of
    /// first appearance. Unclustered vertices are skipped.
    pub fn assignment_vector(&self) -> Vec<usize> {
        let mut labels = std::collections::HashMap::new();
        self.owner
            .iter()
            .flatten()
            .map(|id| {
                let next = labels.len();
                *labels.entry(*id).or_insert(next)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    fn k(n: usize) -> OrderedGraph {
        let edges: Vec<_> = (0..n).flat_map(|b| (0..b).map(move |a| (a, b))).collect();
        OrderedGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn singleton_examples() {
        let mut c = Clustering::new();
        c.singleton(v(0)).unwrap();
        assert_eq!(c.groups(), vec![vec![v(0)]]);
        assert_eq!(c.singleton(v(0)), Err(ClusterError::AlreadyClustered(v(0))));

        let mut c = Clustering::from_groups([vec![v(0), v(1)]]).unwrap();
        c.singleton(v(2)).unwrap();
        assert_eq!(c.groups(), vec![vec![v(0), v(1)], vec![v(2)]]);
    }

    #[test]
    fn merge_examples() {
        let g = k(4);
        let mut c = Clustering::from_groups([vec![v(0), v(1)], vec![v(2), v(3)]]).unwrap();
        let id = c.merge(&g, ClusterId(1), ClusterId(0)).unwrap();
        assert_eq!(id, ClusterId(0));
        assert_eq!(c.groups(), vec![vec![v(0), v(1), v(2), v(3)]]);
        assert_eq!(c.profit(), 6);

        let p3 = OrderedGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut c = Clustering::new();
        let a = c.singleton(v(0)).unwrap();
        c.singleton(v(1)).unwrap();
        let b = c.singleton(v(2)).unwrap();
        assert_eq!(c.merge(&p3, a, b), Err(ClusterError::NotAClique(a, b)));
        assert_eq!(c.merge(&p3, a, a), Err(ClusterError::SelfMerge(a)));
        assert_eq!(
            c.merge(&p3, a, ClusterId(9)),
            Err(ClusterError::UnknownCluster(ClusterId(9)))
        );

        let two_edges = OrderedGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let mut c = Clustering::from_groups([vec![v(0), v(1)], vec![v(2), v(3)]]).unwrap();
        assert!(c.merge(&two_edges, ClusterId(0), ClusterId(1)).is_err());
    }

    #[test]
    fn profit_and_cost_examples() {
        let c = Clustering::from_groups([vec![v(0), v(1), v(2)]]).unwrap();
        assert_eq!(c.profit(), 3);
        let c = Clustering::from_groups([vec![v(0), v(1)], vec![v(2), v(3)]]).unwrap();
        assert_eq!(c.profit(), 2);
        let c = Clustering::from_groups([(0..4).map(v).collect::<Vec<_>>(), (4..8).map(v).collect()]).unwrap();
        assert_eq!(c.profit(), 12);

        let g = k(4);
        let c = Clustering::from_groups([(0..4).map(v).collect::<Vec<_>>()]).unwrap();
        assert_eq!(c.cost(&g), 0);
        let two_edges = OrderedGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let c = Clustering::from_groups((0..4).map(|i| vec![v(i)])).unwrap();
        assert_eq!(c.cost(&two_edges), 2);
    }

    #[test]
    fn merge_adds_product_of_sizes() {
        let g = k(6);
        let mut c = Clustering::from_groups([vec![v(0), v(1), v(2)], vec![v(3), v(4)], vec![v(5)]]).unwrap();
        let before = c.profit();
        c.merge(&g, ClusterId(0), ClusterId(1)).unwrap();
        assert_eq!(c.profit(), before + 6);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn validate_catches_bad_clusterings() {
        let p3 = OrderedGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let c = Clustering::from_groups([vec![v(0), v(1), v(2)]]).unwrap();
        assert_eq!(c.validate(&p3), Err(ClusterError::InvalidCluster(ClusterId(0))));
        let c = Clustering::from_groups([vec![v(0), v(1)]]).unwrap();
        assert!(matches!(c.validate(&p3), Err(ClusterError::Coverage { .. })));
        let c = Clustering::from_groups([vec![v(0), v(1)], vec![v(2)]]).unwrap();
        assert_eq!(c.validate(&p3), Ok(()));
        assert!(Clustering::from_groups([vec![v(0)], vec![v(0)]]).is_err());
    }

    #[test]
    fn coarsening_and_assignment() {
        let g = k(4);
        let mut c = Clustering::new();
        for i in 0..4 {
            c.singleton(v(i)).unwrap();
        }
        let before = c.clone();
        c.merge_vertices(&g, v(3), v(1)).unwrap();
        assert!(before.is_coarsened_by(&c));
        assert!(!c.is_coarsened_by(&before));
        assert_eq!(c.assignment_vector(), vec![0, 1, 2, 1]);
        assert!(c.co_clustered(v(1), v(3)));
    }
}
