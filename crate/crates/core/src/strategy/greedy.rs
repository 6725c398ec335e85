use std::collections::BTreeSet;

use super::{ClusterOp, OnlineStrategy, OpLog, StrategyError};
use crate::clustering::{ClusterId, Clustering};
use crate::graph::{OrderedGraph, VertexId};

/// Joins each new vertex to the largest cluster it is fully adjacent to.
///
/// With `nonprocrastinate` set, the cluster that changed is afterwards merged
/// with compatible clusters until no mergeable pair is left. Starting from an
/// empty clustering this never fires: a pair can only become mergeable
/// through the new vertex, and greedy already absorbs it into the largest
/// compatible cluster, so both variants produce identical clusterings.
#[derive(Clone, Debug, Default)]
pub struct Greedy {
    nonprocrastinate: bool,
}

impl Greedy {
    pub fn new(nonprocrastinate: bool) -> Self {
        Greedy { nonprocrastinate }
    }

    pub fn is_nonprocrastinating(&self) -> bool {
        self.nonprocrastinate
    }
}

/// Picks among equally large candidates: the oldest cluster wins.
pub fn greedy_tiebreak(candidates: &[ClusterId]) -> Option<ClusterId> {
    candidates.iter().copied().min()
}

/// Clusters other than `target` whose union with `target` is a clique.
fn compatible_clusters(graph: &OrderedGraph, clustering: &Clustering, target: ClusterId) -> Vec<ClusterId> {
    let members = clustering.members(target).unwrap_or(&[]);
    let Some(&anchor) = members.first() else {
        return Vec::new();
    };
    let candidates: BTreeSet<ClusterId> = graph
        .neighbors(anchor)
        .filter_map(|u| clustering.cluster_of(u))
        .filter(|&c| c != target)
        .collect();
    candidates
        .into_iter()
        .filter(|&c| {
            let other = clustering.members(c).unwrap_or(&[]);
            members.iter().all(|&a| other.iter().all(|&b| graph.is_adjacent(a, b)))
        })
        .collect()
}

/// Largest candidate; ties go to [`greedy_tiebreak`].
fn largest(clustering: &Clustering, candidates: &[ClusterId]) -> Option<ClusterId> {
    let best = candidates.iter().map(|&c| clustering.cluster_size(c)).max()?;
    let tied: Vec<ClusterId> = candidates
        .iter()
        .copied()
        .filter(|&c| clustering.cluster_size(c) == best)
        .collect();
    greedy_tiebreak(&tied)
}

impl OnlineStrategy for Greedy {
    fn name(&self) -> &str {
        if self.nonprocrastinate {
            "greedy-np"
        } else {
            "greedy"
        }
    }

    fn observe(
        &mut self,
        graph: &OrderedGraph,
        clustering: &mut Clustering,
        v: VertexId,
    ) -> Result<Vec<ClusterOp>, StrategyError> {
        let mut log = OpLog::new(graph, clustering);
        let mut current = log.singleton(v)?;
        let candidates = compatible_clusters(graph, log.clustering, current);
        if let Some(target) = largest(log.clustering, &candidates) {
            current = log.merge(target, current)?;
        }
        if self.nonprocrastinate {
            // Only clusters touching the changed one can have become mergeable.
            loop {
                let candidates = compatible_clusters(graph, log.clustering, current);
                match largest(log.clustering, &candidates) {
                    Some(other) => current = log.merge(current, other)?,
                    None => break,
                }
            }
        }
        Ok(log.ops)
    }
}

/// Whether any two clusters could still be merged. Quadratic; for tests and
/// verification.
pub fn has_mergeable_pair(graph: &OrderedGraph, clustering: &Clustering) -> bool {
    clustering
        .iter()
        .any(|(id, _)| !compatible_clusters(graph, clustering, id).is_empty())
}
