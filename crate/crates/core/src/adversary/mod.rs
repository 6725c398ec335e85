//! Lower-bound instance constructions.
//!
//! Static nemeses come with an explicit reference clustering whose prefix
//! restrictions supply the per-step optimum, so long instances never need
//! the exact solver. The MinCC and skeleton adversaries are adaptive and
//! watch the strategy between arrivals.

mod mincc;
mod skeleton;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::Clustering;
use crate::graph::{ArrivalEvent, OrderedGraph, VertexId};

pub use mincc::{mincc_instance, mincc_nemesis, MinccError, MinccRun};
pub use skeleton::{
    cstar_partition, play_skeleton, skeleton_to_graph, subtree_report, AdversaryMove, AdversaryReport, NodeId,
    SkeletonAdversary, SkeletonError, SkeletonNode, SkeletonOutcome, SkeletonTree, StopReason, SubtreeEntry,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("greedy nemesis needs n >= 4, got {0}")]
    TooSmall(usize),
    #[error("gamma must exceed 1, got {0}")]
    Gamma(f64),
    #[error("need at least one phase")]
    NoPhases,
    #[error("mincc nemesis needs n > 3*beta + 2 (beta {beta}, n {n})")]
    MinccSize { beta: usize, n: usize },
    #[error("pair index {pair} out of range for beta {beta}")]
    MinccPair { pair: usize, beta: usize },
    #[error("instance too large: {0} vertices")]
    TooLarge(usize),
}

/// Fixed arrival sequence plus, where known, the optimum after every step.
#[derive(Clone, Debug)]
pub struct StaticInstance {
    pub events: Vec<ArrivalEvent>,
    /// Optimal (or reference) profit after each step.
    pub analytic_opt: Option<Vec<u64>>,
    /// Clustering of the full graph achieving the last `analytic_opt` value.
    pub reference_clustering: Option<Clustering>,
}

impl StaticInstance {
    pub fn graph(&self) -> OrderedGraph {
        OrderedGraph::from_events(&self.events).expect("constructions emit ordered arrivals")
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Builds arrival events from per-vertex back-neighbor lists.
fn events_from(back: Vec<Vec<VertexId>>) -> Vec<ArrivalEvent> {
    back.into_iter()
        .enumerate()
        .map(|(i, nbrs)| ArrivalEvent::new(VertexId::new(i), nbrs))
        .collect()
}

/// Profit of the reference groups restricted to every prefix. `group_of[v]`
/// names the group of vertex `v`.
fn prefix_profits(group_of: &[usize]) -> Vec<u64> {
    let mut sizes = vec![0u64; group_of.iter().max().map_or(0, |m| m + 1)];
    let mut profit = 0;
    group_of
        .iter()
        .map(|&g| {
            profit += sizes[g];
            sizes[g] += 1;
            profit
        })
        .collect()
}

fn clustering_from(group_of: &[usize]) -> Clustering {
    let mut groups: Vec<Vec<VertexId>> = vec![Vec::new(); group_of.iter().max().map_or(0, |m| m + 1)];
    for (v, &g) in group_of.iter().enumerate() {
        groups[g].push(VertexId::new(v));
    }
    Clustering::from_groups(groups.into_iter().filter(|g| !g.is_empty())).expect("groups are disjoint")
}

/// Odd vertices form a clique, even vertices form a clique, and
/// `(2i-1, 2i)` are matched for `i <= (n-1)/2` (1-based). Greedy pairs up the
/// matching while the optimum takes the two big cliques.
pub fn greedy_nemesis(n: usize) -> Result<StaticInstance, InstanceError> {
    if n < 4 {
        return Err(InstanceError::TooSmall(n));
    }
    let matched = (n - 1) / 2;
    let back = (0..n)
        .map(|v| {
            // 0-based: same parity is adjacent; 2i+1 is matched to 2i.
            let mut nbrs: Vec<VertexId> = (v % 2..v).step_by(2).map(VertexId::new).collect();
            if v % 2 == 1 && v / 2 < matched {
                nbrs.push(VertexId::new(v - 1));
            }
            nbrs
        })
        .collect();
    let opt = (1..=n).map(|t| greedy_nemesis_opt(t, matched)).collect();
    let group_of: Vec<usize> = (0..n).map(|v| v % 2).collect();
    Ok(StaticInstance {
        events: events_from(back),
        analytic_opt: Some(opt),
        reference_clustering: Some(clustering_from(&group_of)),
    })
}

/// Optimum on the first `t` vertices: some matching edges as pairs, the
/// remaining odd and even vertices as two cliques.
fn greedy_nemesis_opt(t: usize, matched: usize) -> u64 {
    let c2 = |k: u64| k * k.saturating_sub(1) / 2;
    let odd = t.div_ceil(2) as u64;
    let even = (t / 2) as u64;
    let edges = (t / 2).min(matched) as u64;
    (0..=edges).map(|m| m + c2(odd - m) + c2(even - m)).max().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Triangle,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Variant::Plain),
            "triangle" => Ok(Variant::Triangle),
            other => Err(format!("unknown variant `{other}` (plain|triangle)")),
        }
    }
}

/// Largest OCC nemesis we are willing to materialise.
const OCC_NEMESIS_MAX_VERTICES: usize = 20_000;

/// Batch edge counts `ceil(gamma^i)` for `i = 0..=phases`.
pub fn batch_sizes(gamma: f64, phases: u32) -> Vec<u64> {
    (0..=phases)
        .map(|i| crate::strategy::phase_threshold(gamma, i))
        .collect()
}

/// Batches of disjoint edges, batch `i` holding `ceil(gamma^i)` of them, with
/// every pair of vertices from different batches adjacent. In the triangle
/// variant the last batch is regrouped into triangles (plus leftover edges)
/// carrying the same number of internal edges.
///
/// The reference clustering puts the `p`-th edge of every batch into one
/// clique `C_p`; in the triangle variant triangle `p` joins `C_p` and the
/// `k`-th leftover edge joins `C_{q+k}`.
pub fn occ_nemesis(gamma: f64, phases: u32, variant: Variant) -> Result<StaticInstance, InstanceError> {
    if !(gamma.is_finite() && gamma > 1.0) {
        return Err(InstanceError::Gamma(gamma));
    }
    if phases == 0 {
        return Err(InstanceError::NoPhases);
    }
    let sizes = batch_sizes(gamma, phases);
    // Each batch is a list of internal groups (edges or triangles).
    let mut batches: Vec<Vec<usize>> = sizes.iter().map(|&m| vec![2; m as usize]).collect();
    if variant == Variant::Triangle {
        let m = *sizes.last().unwrap() as usize;
        let q = m / 3;
        let mut last = vec![3; q];
        last.extend(std::iter::repeat_n(2, m - 3 * q));
        *batches.last_mut().unwrap() = last;
    }
    let total: usize = batches.iter().flatten().sum();
    if total > OCC_NEMESIS_MAX_VERTICES {
        return Err(InstanceError::TooLarge(total));
    }
    let mut back = Vec::with_capacity(total);
    let mut group_of = Vec::with_capacity(total);
    let mut batch_start = 0;
    for batch in &batches {
        for (p, &size) in batch.iter().enumerate() {
            let first = back.len();
            for k in 0..size {
                let mut nbrs: Vec<VertexId> = (0..batch_start).map(VertexId::new).collect();
                nbrs.extend((first..first + k).map(VertexId::new));
                back.push(nbrs);
                group_of.push(p);
            }
        }
        batch_start = back.len();
    }
    Ok(StaticInstance {
        events: events_from(back),
        analytic_opt: Some(prefix_profits(&group_of)),
        reference_clustering: Some(clustering_from(&group_of)),
    })
}
