//! The adaptive skeleton-tree adversary.
//!
//! Every tree node `u` owns two vertices `u^L`, `u^R` joined by a cross
//! edge. Both vertices of `u` are adjacent to `a^L` for every ancestor `a`
//! whose left subtree contains `u`, and to `a^R` otherwise. Non-leaf nodes at
//! depth `>= D` (tentacle nodes) own a third vertex `u^D`, the whisker,
//! adjacent only to `u^R`.
//!
//! Whenever the strategy co-clusters the cross edge of a node (collects it),
//! the adversary extends that node: two children above depth `D`, a single
//! left child plus the whisker from depth `D` on.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::clustering::{ClusterError, Clustering};
use crate::graph::{ArrivalEvent, GraphError, OrderedGraph, VertexId};
use crate::strategy::{OnlineSession, OnlineStrategy, RunError};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonNode {
    pub parent: Option<NodeId>,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub depth: u32,
    /// True when this node is its parent's left child.
    pub is_left: bool,
    pub l: VertexId,
    pub r: VertexId,
    pub whisker: Option<VertexId>,
}

impl SkeletonNode {
    pub fn is_leaf(&self) -> bool {
        self.left.is_none() && self.right.is_none()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("node {0} was already extended")]
    AlreadyExtended(NodeId),
    #[error("strategy formed a cluster that is not a cross edge: {0:?}")]
    ForeignCluster(Vec<VertexId>),
    #[error("subtree of node {node} violates its bound: O = {o}, S = {s}, slack = {slack}")]
    LemmaViolation { node: NodeId, o: u64, s: u64, slack: u64 },
    #[error("reference clustering is invalid: {0}")]
    Reference(#[from] ClusterError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Run(#[from] Box<RunError>),
}

impl From<RunError> for SkeletonError {
    fn from(e: RunError) -> Self {
        SkeletonError::Run(Box::new(e))
    }
}

/// Rooted binary tree together with the arrival sequence it generated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonTree {
    core_depth: u32,
    nodes: Vec<SkeletonNode>,
    events: Vec<ArrivalEvent>,
}

impl SkeletonTree {
    /// A lone root; emits `r^L`, `r^R`.
    pub fn new(core_depth: u32) -> Self {
        let mut tree = SkeletonTree {
            core_depth,
            nodes: Vec::new(),
            events: Vec::new(),
        };
        tree.add_node(None, true);
        tree
    }

    pub fn core_depth(&self) -> u32 {
        self.core_depth
    }

    pub fn nodes(&self) -> &[SkeletonNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &SkeletonNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn events(&self) -> &[ArrivalEvent] {
        &self.events
    }

    pub fn vertex_count(&self) -> usize {
        self.events.len()
    }

    pub fn max_depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Ancestors of `id`, nearest first.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(self.nodes[id].parent, move |&a| self.nodes[a].parent)
    }

    /// The side of each ancestor that `id`'s vertices attach to.
    fn upward(&self, id: NodeId) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut child = id;
        for a in self.ancestors(id) {
            let node = &self.nodes[a];
            out.push(if self.nodes[child].is_left { node.l } else { node.r });
            child = a;
        }
        out
    }

    fn push_vertex(&mut self, back: Vec<VertexId>) -> VertexId {
        let v = VertexId::new(self.events.len());
        self.events.push(ArrivalEvent::new(v, back));
        v
    }

    fn add_node(&mut self, parent: Option<NodeId>, is_left: bool) -> NodeId {
        let id = self.nodes.len();
        let depth = parent.map_or(0, |p| self.nodes[p].depth + 1);
        // Placeholder vertices, fixed below once the upward edges are known.
        self.nodes.push(SkeletonNode {
            parent,
            left: None,
            right: None,
            depth,
            is_left,
            l: VertexId(0),
            r: VertexId(0),
            whisker: None,
        });
        if let Some(p) = parent {
            if is_left {
                self.nodes[p].left = Some(id);
            } else {
                self.nodes[p].right = Some(id);
            }
        }
        let up = self.upward(id);
        let l = self.push_vertex(up.clone());
        let mut back_r = up;
        back_r.push(l);
        let r = self.push_vertex(back_r);
        self.nodes[id].l = l;
        self.nodes[id].r = r;
        id
    }

    /// Extends leaf `id` and returns the new arrivals.
    pub fn extend(&mut self, id: NodeId) -> Result<Vec<ArrivalEvent>, SkeletonError> {
        let node = self.nodes.get(id).ok_or(SkeletonError::UnknownNode(id))?;
        if !node.is_leaf() {
            return Err(SkeletonError::AlreadyExtended(id));
        }
        let first = self.events.len();
        if node.depth < self.core_depth {
            self.add_node(Some(id), true);
            self.add_node(Some(id), false);
        } else {
            self.add_node(Some(id), true);
            let r = self.nodes[id].r;
            let d = self.push_vertex(vec![r]);
            self.nodes[id].whisker = Some(d);
        }
        Ok(self.events[first..].to_vec())
    }

    /// Node owning a vertex, and whether it is the whisker.
    fn owner_map(&self) -> Vec<NodeId> {
        let mut owner = vec![0; self.vertex_count()];
        for (id, n) in self.nodes.iter().enumerate() {
            owner[n.l.index()] = id;
            owner[n.r.index()] = id;
            if let Some(d) = n.whisker {
                owner[d.index()] = id;
            }
        }
        owner
    }

    /// Node whose cross edge is exactly `{a, b}`.
    fn cross_node(&self, owner: &[NodeId], a: VertexId, b: VertexId) -> Option<NodeId> {
        let id = owner[a.index()];
        let n = &self.nodes[id];
        let pair = if a < b { (a, b) } else { (b, a) };
        (pair == (n.l, n.r)).then_some(id)
    }

    /// Length (in edges) of the longest downward path from each node.
    fn heights(&self) -> Vec<u32> {
        let mut h = vec![0u32; self.nodes.len()];
        // Children always have larger ids than their parent.
        for id in (0..self.nodes.len()).rev() {
            let n = &self.nodes[id];
            h[id] = [n.left, n.right]
                .into_iter()
                .flatten()
                .map(|c| h[c] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }
}

/// Builds the graph from the tree structure alone: cross edges, upward
/// edges and whiskers. Vertex ids are the ones assigned during growth.
pub fn skeleton_to_graph(tree: &SkeletonTree) -> Result<OrderedGraph, SkeletonError> {
    let mut edges = Vec::new();
    for (id, n) in tree.nodes.iter().enumerate() {
        edges.push((n.l.index(), n.r.index()));
        for side in tree.upward(id) {
            edges.push((side.index(), n.l.index()));
            edges.push((side.index(), n.r.index()));
        }
        if let Some(d) = n.whisker {
            edges.push((n.r.index(), d.index()));
        }
    }
    Ok(OrderedGraph::from_edges(tree.vertex_count(), &edges)?)
}

/// One clique of the reference partition: the vertices it takes from each
/// node along a downward path, top first.
#[derive(Clone, Debug)]
struct PathClique {
    parts: Vec<(NodeId, Vec<VertexId>)>,
}

impl PathClique {
    fn size(&self) -> u64 {
        self.parts.iter().map(|(_, vs)| vs.len() as u64).sum()
    }
}

/// Reference partition: for each uncovered side of a node, the clique
/// running from that side down the longest path (leftmost on ties) into the
/// corresponding child's subtree, ending with both vertices of the leaf.
/// The uncovered right side of a tentacle node pairs with its whisker.
fn cstar_cliques(tree: &SkeletonTree) -> Vec<PathClique> {
    let heights = tree.heights();
    let deepest_child = |id: NodeId| -> Option<NodeId> {
        let n = &tree.nodes[id];
        match (n.left, n.right) {
            (Some(a), Some(b)) => Some(if heights[b] > heights[a] { b } else { a }),
            (a, b) => a.or(b),
        }
    };
    let mut covered_l = vec![false; tree.len()];
    let mut covered_r = vec![false; tree.len()];
    let mut cliques = Vec::new();
    let mut order: Vec<NodeId> = (0..tree.len()).collect();
    order.sort_by_key(|&id| tree.nodes[id].depth);
    for id in order {
        let node = &tree.nodes[id];
        if node.is_leaf() {
            if !covered_l[id] {
                covered_l[id] = true;
                covered_r[id] = true;
                cliques.push(PathClique {
                    parts: vec![(id, vec![node.l, node.r])],
                });
            }
            continue;
        }
        for left_side in [true, false] {
            let covered = if left_side { &mut covered_l } else { &mut covered_r };
            if covered[id] {
                continue;
            }
            covered[id] = true;
            let top = if left_side { node.l } else { node.r };
            let child = if left_side { node.left } else { node.right };
            let Some(mut cur) = child else {
                let d = node.whisker.expect("one-child nodes carry a whisker");
                cliques.push(PathClique {
                    parts: vec![(id, vec![top, d])],
                });
                continue;
            };
            let mut parts = vec![(id, vec![top])];
            loop {
                let n = &tree.nodes[cur];
                match deepest_child(cur) {
                    None => {
                        covered_l[cur] = true;
                        covered_r[cur] = true;
                        parts.push((cur, vec![n.l, n.r]));
                        break;
                    }
                    Some(next) => {
                        let toward_left = tree.nodes[next].is_left;
                        if toward_left {
                            covered_l[cur] = true;
                            parts.push((cur, vec![n.l]));
                        } else {
                            covered_r[cur] = true;
                            parts.push((cur, vec![n.r]));
                        }
                        cur = next;
                    }
                }
            }
            cliques.push(PathClique { parts });
        }
    }
    cliques
}

/// The reference clique partition of the skeleton graph.
pub fn cstar_partition(tree: &SkeletonTree) -> Result<Clustering, SkeletonError> {
    let groups: Vec<Vec<VertexId>> = cstar_cliques(tree)
        .into_iter()
        .map(|c| c.parts.into_iter().flat_map(|(_, vs)| vs).collect())
        .collect();
    Ok(Clustering::from_groups(groups)?)
}

/// Accounting for the subtree rooted at one node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubtreeEntry {
    pub node: NodeId,
    pub depth: u32,
    /// Profit of the reference partition restricted to the subtree's graph.
    pub o: u64,
    /// Cross edges collected inside the subtree.
    pub s: u64,
    /// Remaining core depth below the node.
    pub h: u32,
    /// Tentacle length below the node.
    pub tentacle: u32,
    /// Subtree stays within the core.
    pub shallow: bool,
}

impl SubtreeEntry {
    /// Additive slack the bound allows: zero for shallow subtrees.
    pub fn slack(&self) -> u64 {
        if self.shallow {
            0
        } else {
            2 * u64::from(self.h + self.tentacle)
        }
    }

    pub fn holds(&self) -> bool {
        self.o + self.slack() >= 6 * self.s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdversaryReport {
    pub core_depth: u32,
    pub nodes: usize,
    pub vertices: usize,
    pub edges: usize,
    pub subtrees: Vec<SubtreeEntry>,
    /// Reference profit on the whole graph.
    pub o_root: u64,
    /// Cross edges collected by the strategy.
    pub s_root: u64,
    /// `o_root / s_root`, `None` when nothing was collected.
    pub ratio: Option<f64>,
    /// Longest tentacle.
    pub s_max: u32,
    /// `2 (D + s_max) / s_root`: how far `o_root / s_root` may fall below 6.
    pub epsilon: Option<f64>,
    pub all_bounds_hold: bool,
}

/// Per-subtree accounting of reference profit against collected edges.
///
/// Fails with [`SkeletonError::LemmaViolation`] if some subtree breaks its
/// bound, which would indicate a bug in the construction.
pub fn subtree_report(tree: &SkeletonTree, collected: &BTreeSet<NodeId>) -> Result<AdversaryReport, SkeletonError> {
    if let Some(&bad) = collected.iter().find(|&&id| id >= tree.len()) {
        return Err(SkeletonError::UnknownNode(bad));
    }
    let n = tree.len();
    let cliques = cstar_cliques(tree);
    // owned[w]: full profit of cliques topped at w; through[w]: profit of the
    // part below w of cliques passing w from above.
    let mut owned = vec![0u64; n];
    let mut through = vec![0u64; n];
    for clique in &cliques {
        let total = clique.size();
        owned[clique.parts[0].0] += total * (total - 1) / 2;
        let mut suffix = total;
        for (i, (node, vs)) in clique.parts.iter().enumerate() {
            if i > 0 {
                through[*node] += suffix * suffix.saturating_sub(1) / 2;
            }
            suffix -= vs.len() as u64;
        }
    }
    let mut o_sub = owned;
    let mut s_sub: Vec<u64> = (0..n).map(|id| u64::from(collected.contains(&id))).collect();
    let mut deepest: Vec<u32> = tree.nodes.iter().map(|x| x.depth).collect();
    for id in (1..n).rev() {
        let p = tree.nodes[id].parent.expect("non-root nodes have parents");
        o_sub[p] += o_sub[id];
        s_sub[p] += s_sub[id];
        deepest[p] = deepest[p].max(deepest[id]);
    }
    let d = tree.core_depth;
    let subtrees: Vec<SubtreeEntry> = (0..n)
        .map(|id| {
            let depth = tree.nodes[id].depth;
            SubtreeEntry {
                node: id,
                depth,
                o: o_sub[id] + through[id],
                s: s_sub[id],
                h: d.saturating_sub(depth),
                tentacle: deepest[id].saturating_sub(depth.max(d)),
                shallow: deepest[id] <= d,
            }
        })
        .collect();
    if let Some(bad) = subtrees.iter().find(|e| !e.holds()) {
        return Err(SkeletonError::LemmaViolation {
            node: bad.node,
            o: bad.o,
            s: bad.s,
            slack: bad.slack(),
        });
    }
    let o_root = subtrees[0].o;
    let s_root = subtrees[0].s;
    let s_max = tree.max_depth().saturating_sub(d);
    let graph = skeleton_to_graph(tree)?;
    Ok(AdversaryReport {
        core_depth: d,
        nodes: n,
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        subtrees,
        o_root,
        s_root,
        ratio: (s_root > 0).then(|| o_root as f64 / s_root as f64),
        s_max,
        epsilon: (s_root > 0).then(|| 2.0 * f64::from(d + s_max) / s_root as f64),
        all_bounds_hold: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The strategy collected nothing in the last round.
    Idle,
    /// The round budget ran out.
    Budget,
}

/// What the adversary does after a round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdversaryMove {
    /// New arrivals for the strategy.
    Extend(Vec<ArrivalEvent>),
    Stop(StopReason),
}

/// Adversary state: the tree, the collected nodes and the round counter.
#[derive(Clone, Debug)]
pub struct SkeletonAdversary {
    tree: SkeletonTree,
    collected: BTreeSet<NodeId>,
    rounds: u64,
    budget: u64,
}

impl SkeletonAdversary {
    /// Budget of `2^(D+1) + extra` rounds; `extra` defaults to `8 * 2^D`.
    pub fn new(core_depth: u32, extra: Option<u64>) -> Self {
        let base = 1u64 << core_depth.min(40);
        SkeletonAdversary {
            tree: SkeletonTree::new(core_depth),
            collected: BTreeSet::new(),
            rounds: 0,
            budget: 2 * base + extra.unwrap_or(8 * base),
        }
    }

    pub fn tree(&self) -> &SkeletonTree {
        &self.tree
    }

    pub fn collected(&self) -> &BTreeSet<NodeId> {
        &self.collected
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Arrivals of the lone root.
    pub fn opening(&self) -> Vec<ArrivalEvent> {
        self.tree.events().to_vec()
    }

    /// Nodes whose cross edge the clustering holds but that were not yet
    /// collected. Errors on any cluster other than a singleton or a cross
    /// edge.
    pub fn newly_collected(&self, clustering: &Clustering) -> Result<Vec<NodeId>, SkeletonError> {
        let owner = self.tree.owner_map();
        let mut out = Vec::new();
        for (_, members) in clustering.iter() {
            match members {
                [_] => {}
                [a, b] if b.index() < owner.len() => match self.tree.cross_node(&owner, *a, *b) {
                    Some(id) if !self.collected.contains(&id) => out.push(id),
                    Some(_) => {}
                    None => return Err(SkeletonError::ForeignCluster(members.to_vec())),
                },
                _ => return Err(SkeletonError::ForeignCluster(members.to_vec())),
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Registers the nodes collected in the last round and extends each.
    /// Once the budget is spent the extensions still happen, but the move is
    /// a stop and the strategy does not see them.
    pub fn respond(&mut self, newly: &[NodeId]) -> Result<AdversaryMove, SkeletonError> {
        if newly.is_empty() {
            return Ok(AdversaryMove::Stop(StopReason::Idle));
        }
        let mut events = Vec::new();
        for &id in newly {
            if id >= self.tree.len() {
                return Err(SkeletonError::UnknownNode(id));
            }
            if !self.collected.insert(id) {
                return Err(SkeletonError::AlreadyExtended(id));
            }
            events.extend(self.tree.extend(id)?);
        }
        self.rounds += 1;
        if self.rounds >= self.budget {
            return Ok(AdversaryMove::Stop(StopReason::Budget));
        }
        Ok(AdversaryMove::Extend(events))
    }
}

#[derive(Clone, Debug)]
pub struct SkeletonOutcome {
    pub tree: SkeletonTree,
    pub collected: BTreeSet<NodeId>,
    pub rounds: u64,
    pub stop: StopReason,
    pub report: AdversaryReport,
    /// Strategy profit on the vertices it saw.
    pub strategy_profit: u64,
}

/// Plays the skeleton adversary against `strategy` until it stops.
pub fn play_skeleton(
    strategy: &mut dyn OnlineStrategy,
    core_depth: u32,
    extra: Option<u64>,
) -> Result<SkeletonOutcome, SkeletonError> {
    let mut adversary = SkeletonAdversary::new(core_depth, extra);
    let mut session = OnlineSession::new(strategy);
    let mut pending = adversary.opening();
    let stop = loop {
        for event in &pending {
            session.step(event)?;
        }
        let newly = adversary.newly_collected(session.clustering())?;
        match adversary.respond(&newly)? {
            AdversaryMove::Extend(events) => pending = events,
            AdversaryMove::Stop(reason) => break reason,
        }
    };
    let report = subtree_report(&adversary.tree, &adversary.collected)?;
    Ok(SkeletonOutcome {
        strategy_profit: session.clustering().profit(),
        rounds: adversary.rounds,
        collected: adversary.collected.clone(),
        tree: adversary.tree,
        stop,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{Greedy, Matching};

    fn tentacle(s: usize) -> (SkeletonTree, BTreeSet<NodeId>) {
        let mut tree = SkeletonTree::new(0);
        let mut cur = 0;
        let mut collected = BTreeSet::new();
        for _ in 0..s {
            tree.extend(cur).unwrap();
            collected.insert(cur);
            cur = tree.node(cur).left.unwrap();
        }
        (tree, collected)
    }

    #[test]
    fn single_root_is_one_edge() {
        let tree = SkeletonTree::new(3);
        let g = skeleton_to_graph(&tree).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(
            cstar_partition(&tree).unwrap().groups(),
            vec![vec![VertexId(0), VertexId(1)]]
        );
    }

    #[test]
    fn two_children_append_triangles() {
        let mut tree = SkeletonTree::new(1);
        let events = tree.extend(0).unwrap();
        assert_eq!(events.len(), 4);
        let g = skeleton_to_graph(&tree).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 3 + 2 * 2);
        // y^L, y^R with r^L; z^L, z^R with r^R.
        assert!(g.is_clique(&[VertexId(0), VertexId(2), VertexId(3)]).unwrap());
        assert!(g.is_clique(&[VertexId(1), VertexId(4), VertexId(5)]).unwrap());
        let cstar = cstar_partition(&tree).unwrap();
        cstar.validate(&g).unwrap();
        assert_eq!(cstar.profit(), 6);
        let report = subtree_report(&tree, &BTreeSet::from([0])).unwrap();
        assert_eq!((report.o_root, report.s_root), (6, 1));
    }

    #[test]
    fn tentacle_extension_adds_triangle_and_whisker() {
        let (tree, _) = tentacle(1);
        let g = skeleton_to_graph(&tree).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert!(g.is_clique(&[VertexId(0), VertexId(2), VertexId(3)]).unwrap());
        assert_eq!(g.neighbors(VertexId(4)).collect::<Vec<_>>(), vec![VertexId(1)]);
    }

    #[test]
    fn short_tentacles_are_tight() {
        for (s, o) in [(1u64, 4u64), (2, 8)] {
            let (tree, collected) = tentacle(s as usize);
            let report = subtree_report(&tree, &collected).unwrap();
            assert_eq!((report.o_root, report.s_root), (o, s));
            assert_eq!(report.o_root + 2 * s, 6 * s);
            assert_eq!(report.subtrees[0].slack(), 2 * s);
        }
        let (tree, _) = tentacle(2);
        let cstar = cstar_partition(&tree).unwrap();
        assert_eq!(cstar.len(), 3);
        assert_eq!(cstar.profit(), 8);
    }

    #[test]
    fn tentacle_profit_formula() {
        for s in 0..12u64 {
            let (tree, collected) = tentacle(s as usize);
            let report = subtree_report(&tree, &collected).unwrap();
            assert_eq!(report.o_root, (s + 2) * (s + 1) / 2 + s);
        }
    }

    #[test]
    fn extending_twice_fails() {
        let mut tree = SkeletonTree::new(1);
        tree.extend(0).unwrap();
        assert_eq!(tree.extend(0).unwrap_err(), SkeletonError::AlreadyExtended(0));
        assert_eq!(tree.extend(9).unwrap_err(), SkeletonError::UnknownNode(9));
    }

    #[test]
    fn idle_strategy_stops_the_game() {
        let out = play_skeleton(&mut Matching::with_limit(0), 2, None).unwrap();
        assert_eq!(out.stop, StopReason::Idle);
        assert_eq!((out.rounds, out.report.s_root, out.report.o_root), (0, 0, 1));
    }

    #[test]
    fn shallow_full_tree_meets_six() {
        let out = play_skeleton(&mut Matching::with_limit(3), 2, None).unwrap();
        assert_eq!(out.stop, StopReason::Idle);
        assert_eq!(out.report.s_root, 3);
        assert!(out.report.o_root >= 6 * out.report.s_root);
        assert_eq!(out.report.o_root, 18);
    }

    #[test]
    fn greedy_and_matching_agree_on_skeletons() {
        let a = play_skeleton(&mut Greedy::new(false), 2, Some(4)).unwrap();
        let b = play_skeleton(&mut Matching::new(), 2, Some(4)).unwrap();
        assert_eq!(a.stop, StopReason::Budget);
        assert_eq!(a.tree, b.tree);
        assert_eq!(a.report, b.report);
    }

    #[test]
    fn graph_from_structure_matches_arrivals() {
        let out = play_skeleton(&mut Matching::new(), 2, Some(3)).unwrap();
        let from_events = OrderedGraph::from_events(out.tree.events()).unwrap();
        assert_eq!(skeleton_to_graph(&out.tree).unwrap(), from_events);
    }
}
