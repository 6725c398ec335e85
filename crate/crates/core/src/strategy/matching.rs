use super::{ClusterOp, OnlineStrategy, OpLog, StrategyError};
use crate::clustering::Clustering;
use crate::graph::{OrderedGraph, VertexId};

/// Pairs each new vertex with its lowest-id neighbor that is still a
/// singleton, until `limit` pairs have been formed.
///
/// Never grows a cluster beyond two vertices. On the adversarial skeleton
/// graphs this collects every cross edge as soon as it appears; with a limit
/// of zero it never merges at all.
#[derive(Clone, Debug, Default)]
pub struct Matching {
    limit: Option<usize>,
    formed: usize,
}

impl Matching {
    pub fn new() -> Self {
        Matching::default()
    }

    pub fn with_limit(limit: usize) -> Self {
        Matching {
            limit: Some(limit),
            formed: 0,
        }
    }

    pub fn pairs_formed(&self) -> usize {
        self.formed
    }
}

impl OnlineStrategy for Matching {
    fn name(&self) -> &str {
        "matching"
    }

    fn observe(
        &mut self,
        graph: &OrderedGraph,
        clustering: &mut Clustering,
        v: VertexId,
    ) -> Result<Vec<ClusterOp>, StrategyError> {
        let mut log = OpLog::new(graph, clustering);
        let mine = log.singleton(v)?;
        if self.limit.is_some_and(|l| self.formed >= l) {
            return Ok(log.ops);
        }
        let partner = graph.neighbors(v).find_map(|u| {
            let c = log.clustering.cluster_of(u)?;
            (c != mine && log.clustering.cluster_size(c) == 1).then_some(c)
        });
        if let Some(c) = partner {
            log.merge(c, mine)?;
            self.formed += 1;
        }
        Ok(log.ops)
    }
}
