//! Online strategies and the driver that replays an instance against them.

mod greedy;
mod matching;
mod occ;

use serde::Serialize;
use thiserror::Error;

use crate::clustering::{ClusterError, ClusterId, Clustering};
use crate::graph::{ArrivalEvent, GraphError, OrderedGraph, VertexId};
use crate::ratio::{Objective, RatioTrace};
use crate::solver::{max_clique_partition, SolveBudget, SolveError};

pub use greedy::{greedy_tiebreak, has_mergeable_pair, Greedy};
pub use matching::Matching;
pub use occ::{phase_threshold, Occ, PhaseRecord, PhaseState, GAMMA_ALTERNATIVE, GAMMA_DEFAULT};

/// One clustering operation performed by a strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClusterOp {
    Singleton(VertexId),
    /// `absorbed` was merged into `kept`.
    Merge {
        kept: ClusterId,
        absorbed: ClusterId,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("solver hit its node limit on a pool component of {size} vertices")]
    NodeLimit { size: usize },
    #[error("invalid strategy parameter: {0}")]
    Parameter(String),
}

/// An online clique-clustering strategy.
///
/// On each arrival the driver hands over the graph (already containing `v`)
/// and the current clustering (not yet containing `v`). The strategy must
/// open the singleton `{v}` and may then merge any clusters whose union is a
/// clique. All mutation goes through [`Clustering`], so clusters can never be
/// split.
pub trait OnlineStrategy {
    fn name(&self) -> &str;

    fn observe(
        &mut self,
        graph: &OrderedGraph,
        clustering: &mut Clustering,
        v: VertexId,
    ) -> Result<Vec<ClusterOp>, StrategyError>;
}

impl<S: OnlineStrategy + ?Sized> OnlineStrategy for Box<S> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn observe(
        &mut self,
        graph: &OrderedGraph,
        clustering: &mut Clustering,
        v: VertexId,
    ) -> Result<Vec<ClusterOp>, StrategyError> {
        (**self).observe(graph, clustering, v)
    }
}

/// Records operations while applying them.
pub(crate) struct OpLog<'a> {
    pub graph: &'a OrderedGraph,
    pub clustering: &'a mut Clustering,
    pub ops: Vec<ClusterOp>,
}

impl<'a> OpLog<'a> {
    pub fn new(graph: &'a OrderedGraph, clustering: &'a mut Clustering) -> Self {
        OpLog {
            graph,
            clustering,
            ops: Vec::new(),
        }
    }

    pub fn singleton(&mut self, v: VertexId) -> Result<ClusterId, ClusterError> {
        let id = self.clustering.singleton(v)?;
        self.ops.push(ClusterOp::Singleton(v));
        Ok(id)
    }

    pub fn merge(&mut self, a: ClusterId, b: ClusterId) -> Result<ClusterId, ClusterError> {
        let kept = self.clustering.merge(self.graph, a, b)?;
        let absorbed = if kept == a { b } else { a };
        self.ops.push(ClusterOp::Merge { kept, absorbed });
        Ok(kept)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("step {t}: {source}")]
    Strategy {
        t: usize,
        #[source]
        source: StrategyError,
    },
    #[error("step {t}: {source}")]
    Solve {
        t: usize,
        #[source]
        source: SolveError,
    },
    #[error("step {t}: exact optimum not proven within the node limit")]
    Unproven { t: usize },
    #[error("analytic optimum has {got} values for {expected} steps")]
    AnalyticLength { expected: usize, got: usize },
    #[error("step {t}: strategy broke the online contract: {message}")]
    Contract { t: usize, message: String },
}

impl RunError {
    /// True for solver resource exhaustion, as opposed to malformed input or
    /// strategy bugs.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            RunError::Solve { .. }
                | RunError::Unproven { .. }
                | RunError::Strategy {
                    source: StrategyError::Solve(_) | StrategyError::NodeLimit { .. },
                    ..
                }
        )
    }
}

/// Drives a strategy through arrivals one at a time.
///
/// With validation enabled every step also runs the full clustering
/// validator and checks that the new clustering only coarsens the old one.
pub struct OnlineSession<'s> {
    strategy: &'s mut dyn OnlineStrategy,
    graph: OrderedGraph,
    clustering: Clustering,
    validate: bool,
}

impl<'s> OnlineSession<'s> {
    pub fn new(strategy: &'s mut dyn OnlineStrategy) -> Self {
        OnlineSession {
            strategy,
            graph: OrderedGraph::new(),
            clustering: Clustering::new(),
            validate: cfg!(debug_assertions),
        }
    }

    pub fn with_validation(mut self, on: bool) -> Self {
        self.validate = on;
        self
    }

    pub fn graph(&self) -> &OrderedGraph {
        &self.graph
    }

    pub fn clustering(&self) -> &Clustering {
        &self.clustering
    }

    pub fn strategy_name(&self) -> &str {
        self.strategy.name()
    }

    pub fn into_parts(self) -> (OrderedGraph, Clustering) {
        (self.graph, self.clustering)
    }

    /// Reveals one vertex and lets the strategy react.
    pub fn step(&mut self, event: &ArrivalEvent) -> Result<Vec<ClusterOp>, RunError> {
        self.graph.add_vertex(event)?;
        let t = self.graph.vertex_count();
        let before = self.validate.then(|| self.clustering.clone());
        let profit_before = self.clustering.profit();
        let ops = self
            .strategy
            .observe(&self.graph, &mut self.clustering, event.vertex)
            .map_err(|source| RunError::Strategy { t, source })?;
        let contract = |message: String| RunError::Contract { t, message };
        if ops.first() != Some(&ClusterOp::Singleton(event.vertex)) {
            return Err(contract("first operation must open the new singleton".into()));
        }
        if self.clustering.clustered_count() != t || self.clustering.profit() < profit_before {
            return Err(contract("clustering does not cover the revealed vertices".into()));
        }
        if let Some(before) = before {
            self.clustering
                .validate(&self.graph)
                .map_err(|e| contract(e.to_string()))?;
            if !before.is_coarsened_by(&self.clustering) {
                return Err(contract("co-clustered vertices were separated".into()));
            }
        }
        Ok(ops)
    }
}

/// Where the per-step optimum comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum OptMode {
    /// Solve every prefix graph exactly.
    Exact(SolveBudget),
    /// Caller-supplied optimal profit after each step.
    Analytic(Vec<u64>),
}

/// Everything a finished run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub graph: OrderedGraph,
    pub clustering: Clustering,
    pub trace: RatioTrace,
    /// Operations of each step.
    pub ops: Vec<Vec<ClusterOp>>,
}

impl RunOutcome {
    pub fn worst(&self) -> Option<&crate::ratio::StepRecord> {
        self.trace.worst()
    }
}

/// Replays `events` against `strategy` and records the ratio after every
/// step.
pub fn run_online(
    strategy: &mut dyn OnlineStrategy,
    events: &[ArrivalEvent],
    opt: &OptMode,
    objective: Objective,
) -> Result<RunOutcome, RunError> {
    if let OptMode::Analytic(values) = opt {
        if values.len() != events.len() {
            return Err(RunError::AnalyticLength {
                expected: events.len(),
                got: values.len(),
            });
        }
    }
    let mut session = OnlineSession::new(strategy);
    let mut trace = RatioTrace::new(objective);
    let mut all_ops = Vec::with_capacity(events.len());
    for (i, event) in events.iter().enumerate() {
        let t = i + 1;
        all_ops.push(session.step(event)?);
        let opt_profit = match opt {
            OptMode::Analytic(values) => values[i],
            OptMode::Exact(budget) => {
                let r =
                    max_clique_partition(session.graph(), *budget).map_err(|source| RunError::Solve { t, source })?;
                if !r.proven_optimal {
                    return Err(RunError::Unproven { t });
                }
                r.value
            }
        };
        let edges = session.graph().edge_count() as u64;
        let ours = session.clustering().profit();
        match objective {
            Objective::Max => trace.push(ours, opt_profit),
            Objective::Min => trace.push(edges - ours, edges - opt_profit),
        }
    }
    let (graph, clustering) = session.into_parts();
    Ok(RunOutcome {
        graph,
        clustering,
        trace,
        ops: all_ops,
    })
}
