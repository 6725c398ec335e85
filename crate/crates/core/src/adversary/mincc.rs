use super::{events_from, InstanceError, StaticInstance};
use crate::clustering::Clustering;
use crate::graph::{ArrivalEvent, VertexId};
use crate::ratio::{Objective, RatioTrace};
use crate::strategy::{OnlineSession, OnlineStrategy, RunError};

/// Result of the adaptive MinCC game.
#[derive(Clone, Debug)]
pub struct MinccRun {
    pub events: Vec<ArrivalEvent>,
    /// Cost trace against the analytic optimum.
    pub trace: RatioTrace,
    pub clustering: Clustering,
    /// 0-based index of the pair the clique was grown around; `None` when the
    /// strategy clustered no pair and the game stopped early.
    pub pair: Option<usize>,
}

fn check_size(beta: usize, n: usize) -> Result<(), InstanceError> {
    if n <= 3 * beta + 2 {
        return Err(InstanceError::MinccSize { beta, n });
    }
    Ok(())
}

/// Back-neighbor lists of the `beta + 1` disjoint edges.
fn matching_prefix(beta: usize) -> Vec<Vec<VertexId>> {
    (0..2 * beta + 2)
        .map(|v| {
            if v % 2 == 1 {
                vec![VertexId::new(v - 1)]
            } else {
                Vec::new()
            }
        })
        .collect()
}

/// Back-neighbor lists of the clique grown around the second endpoint of
/// `pair`, `n - 2*beta - 2` new vertices.
fn clique_suffix(beta: usize, n: usize, pair: usize) -> Vec<Vec<VertexId>> {
    let anchor = VertexId::new(2 * pair + 1);
    let start = 2 * beta + 2;
    (start..n)
        .map(|v| std::iter::once(anchor).chain((start..v).map(VertexId::new)).collect())
        .collect()
}

/// Optimal cost after each step: zero on the matching, one (the cut pair
/// edge) once the clique starts.
fn analytic_costs(beta: usize, n: usize) -> Vec<u64> {
    (0..n).map(|v| u64::from(v >= 2 * beta + 2)).collect()
}

/// Profits matching [`analytic_costs`], for replay through `run_online`.
fn analytic_profits(beta: usize, n: usize) -> Vec<u64> {
    let mut edges = 0u64;
    (0..n)
        .map(|v| {
            edges += if v < 2 * beta + 2 {
                (v % 2) as u64
            } else {
                (v - 2 * beta - 1) as u64
            };
            edges - u64::from(v >= 2 * beta + 2)
        })
        .collect()
}

/// The MinCC instance for a fixed choice of pair, e.g. for writing to disk.
pub fn mincc_instance(beta: usize, n: usize, pair: usize) -> Result<StaticInstance, InstanceError> {
    check_size(beta, n)?;
    if pair > beta {
        return Err(InstanceError::MinccPair { pair, beta });
    }
    let mut back = matching_prefix(beta);
    back.extend(clique_suffix(beta, n, pair));
    let mut groups: Vec<Vec<VertexId>> = (0..=beta)
        .filter(|&p| p != pair)
        .map(|p| vec![VertexId::new(2 * p), VertexId::new(2 * p + 1)])
        .collect();
    groups.push(vec![VertexId::new(2 * pair)]);
    groups.push(
        std::iter::once(2 * pair + 1)
            .chain(2 * beta + 2..n)
            .map(VertexId::new)
            .collect(),
    );
    Ok(StaticInstance {
        events: events_from(back),
        analytic_opt: Some(analytic_profits(beta, n)),
        reference_clustering: Some(Clustering::from_groups(groups).expect("groups are disjoint")),
    })
}

/// Plays the MinCC adversary against `strategy`.
///
/// After the `beta + 1` disjoint edges the adversary inspects the clustering,
/// picks the lowest-index pair the strategy clustered and grows a clique of
/// size `n - 2*beta - 1` around its second endpoint. If no pair was clustered
/// the game stops there, with an unbounded ratio.
pub fn mincc_nemesis(beta: usize, n: usize, strategy: &mut dyn OnlineStrategy) -> Result<MinccRun, MinccError> {
    check_size(beta, n)?;
    let opt = analytic_costs(beta, n);
    let mut session = OnlineSession::new(strategy);
    let mut trace = RatioTrace::new(Objective::Min);
    let mut step = |session: &mut OnlineSession<'_>, event: &ArrivalEvent| -> Result<(), RunError> {
        session.step(event)?;
        let cost = session.clustering().cost(session.graph());
        trace.push(cost, opt[event.vertex.index()]);
        Ok(())
    };
    let mut events = events_from(matching_prefix(beta));
    for event in &events {
        step(&mut session, event)?;
    }
    let pair = (0..=beta).find(|&p| {
        session
            .clustering()
            .co_clustered(VertexId::new(2 * p), VertexId::new(2 * p + 1))
    });
    if let Some(p) = pair {
        let suffix = clique_suffix(beta, n, p)
            .into_iter()
            .enumerate()
            .map(|(i, nbrs)| ArrivalEvent::new(VertexId::new(2 * beta + 2 + i), nbrs));
        for event in suffix {
            step(&mut session, &event)?;
            events.push(event);
        }
    }
    let (_, clustering) = session.into_parts();
    Ok(MinccRun {
        events,
        trace,
        clustering,
        pair,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum MinccError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Run(#[from] RunError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::Ratio;
    use crate::strategy::{run_online, Greedy, Matching, OptMode};

    #[test]
    fn greedy_np_pays_everything_but_one_edge() {
        for n in [10, 30] {
            let run = mincc_nemesis(0, n, &mut Greedy::new(true)).unwrap();
            let last = run.trace.last().unwrap();
            assert_eq!((last.strategy_value, last.opt_value), (n as u64 - 2, 1));
            assert_eq!(run.pair, Some(0));
        }
    }

    #[test]
    fn beta_one_cost_bound() {
        let run = mincc_nemesis(1, 20, &mut Greedy::new(true)).unwrap();
        let last = run.trace.last().unwrap();
        assert!(last.strategy_value >= 16);
        assert_eq!(last.opt_value, 1);
    }

    #[test]
    fn idle_strategy_stops_early_with_infinite_ratio() {
        let run = mincc_nemesis(2, 20, &mut Matching::with_limit(0)).unwrap();
        assert_eq!(run.events.len(), 6);
        assert_eq!(run.pair, None);
        let last = run.trace.last().unwrap();
        assert!(last.strategy_value >= 3);
        assert_eq!(last.ratio, Ratio::Infinite);
    }

    #[test]
    fn fixed_instance_agrees_with_the_game() {
        let inst = mincc_instance(1, 12, 0).unwrap();
        let g = inst.graph();
        let reference = inst.reference_clustering.clone().unwrap();
        reference.validate(&g).unwrap();
        assert_eq!(reference.cost(&g), 1);
        let opt = OptMode::Analytic(inst.analytic_opt.clone().unwrap());
        let replay = run_online(&mut Greedy::new(true), &inst.events, &opt, Objective::Min).unwrap();
        let game = mincc_nemesis(1, 12, &mut Greedy::new(true)).unwrap();
        assert_eq!(replay.trace, game.trace);
        let exact = run_online(
            &mut Greedy::new(true),
            &inst.events,
            &OptMode::Exact(Default::default()),
            Objective::Min,
        )
        .unwrap();
        assert_eq!(exact.trace, game.trace);
        assert!(mincc_instance(1, 5, 0).is_err());
        assert!(mincc_instance(1, 12, 2).is_err());
    }
}
