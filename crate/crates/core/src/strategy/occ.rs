use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{ClusterOp, OnlineStrategy, OpLog, StrategyError};
use crate::clustering::Clustering;
use crate::graph::{OrderedGraph, VertexId};
use crate::solver::{max_clique_partition, SolveBudget};

/// `(3 + sqrt 13) / 2`, the growth factor minimising the asymptotic bound.
pub const GAMMA_DEFAULT: f64 = 3.302_775_637_731_995;
/// Alternative growth factor used in the sensitivity experiments.
pub const GAMMA_ALTERNATIVE: f64 = 4.023_234_28;

/// Read-only view of the phase machinery.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseState {
    pub j: u32,
    /// Vertices currently in singleton clusters.
    pub pool: Vec<VertexId>,
    pub gamma: f64,
    pub threshold: u64,
}

/// One completed phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseRecord {
    pub phase: u32,
    pub threshold: u64,
    /// Profit committed when the phase ended.
    pub committed: u64,
    /// 1-based arrival that triggered the commit.
    pub step: usize,
    /// Number of clusters committed.
    pub clusters: usize,
}

#[derive(Clone, Debug)]
struct PoolComponent {
    members: Vec<VertexId>,
    value: u64,
    groups: Vec<Vec<VertexId>>,
}

/// The phase-based doubling strategy.
///
/// New vertices wait as singletons in the pool `U`. Whenever an optimal
/// clustering of the graph induced by `U` reaches profit `ceil(gamma^j)`,
/// all of its non-singleton clusters are committed and phase `j` ends.
/// Committed clusters are never touched again.
///
/// The optimum of `U` is maintained per connected component; an arrival only
/// re-solves the component it lands in.
#[derive(Clone, Debug)]
pub struct Occ {
    gamma: f64,
    phase: u32,
    budget: SolveBudget,
    pool: BTreeSet<VertexId>,
    component_of: BTreeMap<VertexId, usize>,
    components: BTreeMap<usize, PoolComponent>,
    next_component: usize,
    pool_value: u64,
    history: Vec<PhaseRecord>,
}

/// `ceil(gamma^j)`.
pub fn phase_threshold(gamma: f64, j: u32) -> u64 {
    gamma.powi(j as i32).ceil() as u64
}

impl Occ {
    pub fn new(gamma: f64) -> Result<Self, StrategyError> {
        Occ::with_budget(gamma, SolveBudget::default())
    }

    pub fn with_budget(gamma: f64, budget: SolveBudget) -> Result<Self, StrategyError> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(StrategyError::Parameter(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Occ {
            gamma,
            phase: 0,
            budget,
            pool: BTreeSet::new(),
            component_of: BTreeMap::new(),
            components: BTreeMap::new(),
            next_component: 0,
            pool_value: 0,
            history: Vec::new(),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn threshold(&self) -> u64 {
        phase_threshold(self.gamma, self.phase)
    }

    /// Optimal profit of the pool right now.
    pub fn pool_value(&self) -> u64 {
        self.pool_value
    }

    pub fn history(&self) -> &[PhaseRecord] {
        &self.history
    }

    pub fn state(&self) -> PhaseState {
        PhaseState {
            j: self.phase,
            pool: self.pool.iter().copied().collect(),
            gamma: self.gamma,
            threshold: self.threshold(),
        }
    }

    fn insert(&mut self, graph: &OrderedGraph, v: VertexId) -> Result<(), StrategyError> {
        let touched: BTreeSet<usize> = graph
            .neighbors(v)
            .filter_map(|u| self.component_of.get(&u).copied())
            .collect();
        let mut members = vec![v];
        for id in &touched {
            let comp = self.components.remove(id).expect("indexed component exists");
            self.pool_value -= comp.value;
            members.extend(comp.members);
        }
        members.sort_unstable();
        let (value, groups) = if members.len() == 1 {
            (0, vec![members.clone()])
        } else {
            let sub = graph.induced(&members);
            let result = max_clique_partition(&sub, self.budget)?;
            if !result.proven_optimal {
                return Err(StrategyError::NodeLimit { size: members.len() });
            }
            let groups = result
                .clustering
                .groups()
                .into_iter()
                .map(|g| g.into_iter().map(|l| members[l.index()]).collect())
                .collect();
            (result.value, groups)
        };
        let id = self.next_component;
        self.next_component += 1;
        for &m in &members {
            self.component_of.insert(m, id);
        }
        self.pool.insert(v);
        self.pool_value += value;
        self.components.insert(id, PoolComponent { members, value, groups });
        Ok(())
    }

    fn commit(&mut self, log: &mut OpLog<'_>, step: usize) -> Result<(), StrategyError> {
        let threshold = self.threshold();
        let committed = self.pool_value;
        let mut clusters = 0;
        let components = std::mem::take(&mut self.components);
        self.component_of.clear();
        self.pool_value = 0;
        for comp in components.into_values() {
            for group in comp.groups {
                if group.len() < 2 {
                    continue;
                }
                let mut id = log
                    .clustering
                    .cluster_of(group[0])
                    .expect("pool vertices are clustered");
                for &w in &group[1..] {
                    let other = log.clustering.cluster_of(w).expect("pool vertices are clustered");
                    id = log.merge(id, other)?;
                }
                for w in &group {
                    self.pool.remove(w);
                }
                clusters += 1;
            }
        }
        // What is left of the pool is independent: one component per vertex.
        for &w in &self.pool {
            let id = self.next_component;
            self.next_component += 1;
            self.component_of.insert(w, id);
            self.components.insert(
                id,
                PoolComponent {
                    members: vec![w],
                    value: 0,
                    groups: vec![vec![w]],
                },
            );
        }
        self.history.push(PhaseRecord {
            phase: self.phase,
            threshold,
            committed,
            step,
            clusters,
        });
        self.phase += 1;
        Ok(())
    }
}

impl OnlineStrategy for Occ {
    fn name(&self) -> &str {
        "occ"
    }

    fn observe(
        &mut self,
        graph: &OrderedGraph,
        clustering: &mut Clustering,
        v: VertexId,
    ) -> Result<Vec<ClusterOp>, StrategyError> {
        let mut log = OpLog::new(graph, clustering);
        log.singleton(v)?;
        self.insert(graph, v)?;
        if self.pool_value >= self.threshold() {
            self.commit(&mut log, graph.vertex_count())?;
        }
        Ok(log.ops)
    }
}
