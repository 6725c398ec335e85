//! Verification suites: each checks one family of invariants over many
//! instances and returns a machine-readable summary.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adversary::{cstar_partition, mincc_nemesis, play_skeleton, skeleton_to_graph, SkeletonTree};
use crate::analysis::{asymptotic_ratio, profvalue_gap, recurrence_table, tail_bound, tail_majorant, OccParams};
use crate::graph::OrderedGraph;
use crate::random::{disjoint_cliques, erdos_renyi, random_partition_sizes, rng, shuffled, EDGE_PROBABILITIES};
use crate::ratio::{Objective, Ratio};
use crate::solver::{brute_force_partition, max_clique_partition, SolveBudget};
use crate::strategy::{run_online, Greedy, Matching, OnlineStrategy, OptMode};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "CLIQUESTREAM_THREADS";

pub const SUITES: [&str; 6] = [
    "profvalue",
    "table",
    "solver-oracle",
    "greedy-small",
    "skeleton-lemmas",
    "mincc-bound",
];

/// Published table values: `(S_min, S_max, R')` for `j = 0..=8`.
pub const REFERENCE_TABLE: [(u64, u64, f64); 9] = [
    (1, 1, 1.000),
    (5, 7, 10.000),
    (16, 23, 13.185),
    (53, 68, 18.636),
    (172, 202, 21.881),
    (566, 623, 22.641),
    (1864, 1972, 21.516),
    (6152, 6352, 19.925),
    (20311, 20679, 18.509),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub passed: bool,
    pub checked: u64,
    pub failures: Vec<String>,
    pub details: Value,
}

impl VerifyReport {
    fn new(suite: &str, checked: u64, failures: Vec<String>, details: Value) -> Self {
        VerifyReport {
            suite: suite.to_string(),
            passed: failures.is_empty(),
            checked,
            failures,
            details,
        }
    }
}

/// Knobs for the randomised suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub samples: u64,
    pub seed: u64,
    /// Largest random graph for the solver oracle.
    pub nmax: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 10_000,
            seed: 1,
            nmax: 9,
        }
    }
}

/// Worker pool honouring [`THREADS_ENV`].
pub fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder.build().expect("thread pool starts")
}

pub fn run_suite(name: &str, opts: VerifyOptions) -> Option<VerifyReport> {
    let pool = thread_pool();
    pool.install(|| {
        Some(match name {
            "profvalue" => verify_profvalue(),
            "table" => verify_table(),
            "solver-oracle" => verify_solver_oracle(opts),
            "greedy-small" => verify_greedy_small(opts),
            "skeleton-lemmas" => verify_skeleton_lemmas(),
            "mincc-bound" => verify_mincc_bound(opts),
            _ => return None,
        })
    })
}

fn collect_failures<I: ParallelIterator<Item = Option<String>>>(it: I) -> Vec<String> {
    let mut v: Vec<String> = it.flatten().collect();
    v.sort();
    v.truncate(20);
    v
}

/// The profit-gap function is non-negative on `a, b <= 60` and a
/// 1000-point grid of `x`, and matches its closed forms at `x = 1` and at
/// the interior critical point.
pub fn verify_profvalue() -> VerifyReport {
    let failures = collect_failures((0u64..=60).into_par_iter().map(|a| {
        let mut min = f64::INFINITY;
        for b in 0..=60u64 {
            for k in 1..=1000 {
                let x = k as f64 / 1000.0;
                let f = profvalue_gap(a, b, x).expect("grid lies in (0, 1]");
                min = min.min(f);
                if f < -1e-9 {
                    return Some(format!("F({a},{b},{x}) = {f}"));
                }
            }
            let (af, bf) = (a as f64, b as f64);
            let at_one = profvalue_gap(a, b, 1.0).unwrap();
            if (at_one - ((bf - af).powi(2) - (bf - af))).abs() > 1e-9 {
                return Some(format!("F({a},{b},1) closed form"));
            }
            if a >= 2 && b >= 2 && b <= a {
                let x = (bf - 1.0) / (af - 1.0);
                let f = profvalue_gap(a, b, x).unwrap();
                let expect = (af - bf) * (bf - 1.0) / (af - 1.0);
                if (f - expect).abs() > 1e-9 * (1.0 + expect.abs()) {
                    return Some(format!("F({a},{b},(b-1)/(a-1)) = {f}, expected {expect}"));
                }
            }
        }
        None
    }));
    VerifyReport::new(
        "profvalue",
        61 * 61 * 1000,
        failures,
        json!({"a_max": 60, "b_max": 60, "grid": 1000}),
    )
}

/// Recurrence table against the published rows, maximum, tail and the
/// asymptotic ratio at both presets.
// Negated comparisons below are deliberate: a NaN must count as a failure.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn verify_table() -> VerifyReport {
    let p = OccParams::optimal();
    let mut failures = Vec::new();
    let rows = match recurrence_table(p.gamma, p.x, 30) {
        Ok(r) => r,
        Err(e) => return VerifyReport::new("table", 0, vec![e.to_string()], Value::Null),
    };
    let mut matched = 0;
    for (row, &(s_min, s_max, r)) in rows.iter().zip(REFERENCE_TABLE.iter()) {
        if row.s_min == s_min && row.s_max == s_max && (row.rprime - r).abs() <= 1e-3 {
            matched += 1;
        } else {
            failures.push(format!(
                "row {}: got {}/{} {:.5}, expected {}/{} {:.3}",
                row.j, row.s_min, row.s_max, row.rprime, s_min, s_max, r
            ));
        }
    }
    let (arg, max) = rows
        .iter()
        .map(|r| (r.j, r.rprime))
        .fold((0, f64::MIN), |best, cur| if cur.1 > best.1 { cur } else { best });
    if arg != 5 || (max - 22.641).abs() > 1e-3 {
        failures.push(format!("maximum {max:.4} at j={arg}, expected 22.641 at j=5"));
    }
    let tail = tail_bound(p.gamma, p.x, 8, 30);
    let mut tail_json = Value::Null;
    match tail {
        Ok(t) => {
            if !(t.alpha_sup < 0.6 && t.beta_sup < 8.0 && t.limit <= 20.0) {
                failures.push(format!("tail bound {t:?} outside alpha < 3/5, beta < 8"));
            }
            let hat = tail_majorant(0.6, 8.0, rows[8].rprime, 8, 30);
            for &(j, r) in &hat {
                if r > 20.0 + 1e-12 || rows[j as usize].rprime > r + 1e-9 {
                    failures.push(format!(
                        "tail majorant at j={j}: {r} vs bound {}",
                        rows[j as usize].rprime
                    ));
                }
            }
            tail_json = json!({"alpha_sup": t.alpha_sup, "beta_sup": t.beta_sup, "limit": t.limit});
        }
        Err(e) => failures.push(e.to_string()),
    }
    let r_opt = asymptotic_ratio(p.gamma, p.x).unwrap_or(f64::NAN);
    let alt = OccParams::alternative();
    let r_alt = asymptotic_ratio(alt.gamma, alt.x).unwrap_or(f64::NAN);
    if !((r_opt - 15.6455).abs() <= 1e-3) {
        failures.push(format!("R at optimal parameters = {r_opt}"));
    }
    if !((r_alt - 15.902).abs() <= 1e-3) {
        failures.push(format!("R at alternative parameters = {r_alt}"));
    }
    VerifyReport::new(
        "table",
        rows.len() as u64,
        failures,
        json!({
            "rows_matched": matched,
            "rows": rows.iter().take(9).collect::<Vec<_>>(),
            "max": {"j": arg, "rprime": max},
            "tail": tail_json,
            "asymptotic": {"optimal": r_opt, "alternative": r_alt},
        }),
    )
}

/// Every graph on `n` vertices, edges enumerated by bit mask.
pub fn graph_from_mask(n: usize, mask: u64) -> OrderedGraph {
    let mut edges = Vec::new();
    let mut k = 0;
    for b in 1..n {
        for a in 0..b {
            if mask >> k & 1 == 1 {
                edges.push((a, b));
            }
            k += 1;
        }
    }
    OrderedGraph::from_edges(n, &edges).expect("mask edges are in range")
}

fn oracle_mismatch(g: &OrderedGraph) -> Option<String> {
    let budget = SolveBudget::default();
    let fast = max_clique_partition(g, budget).ok()?;
    let slow = brute_force_partition(g).ok()?;
    let valid = fast.clustering.validate(g).is_ok() && fast.clustering.profit() == fast.value;
    (!valid || !fast.proven_optimal || fast.value != slow.value).then(|| {
        format!(
            "n={} edges={:?}: bnb {} brute {}",
            g.vertex_count(),
            g.edge_list(),
            fast.value,
            slow.value
        )
    })
}

/// Branch and bound against brute force: exhaustively for `n <= 6`, then on
/// `samples` seeded random graphs with `n <= nmax`.
pub fn verify_solver_oracle(opts: VerifyOptions) -> VerifyReport {
    let nmax = opts.nmax.clamp(1, crate::solver::BRUTE_FORCE_MAX);
    let exhaustive_n = nmax.min(6);
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for n in 1..=exhaustive_n {
        let pairs = n * (n - 1) / 2;
        let count = 1u64 << pairs;
        checked += count;
        failures.extend(collect_failures(
            (0..count)
                .into_par_iter()
                .map(|mask| oracle_mismatch(&graph_from_mask(n, mask))),
        ));
    }
    failures.extend(collect_failures((0..opts.samples).into_par_iter().map(|i| {
        let mut r = rng(opts.seed.wrapping_mul(1_000_003).wrapping_add(i));
        let n = 1 + (i as usize % nmax);
        let p = EDGE_PROBABILITIES[(i / nmax as u64) as usize % 3];
        oracle_mismatch(&erdos_renyi(n, p, &mut r))
    })));
    checked += opts.samples;
    VerifyReport::new(
        "solver-oracle",
        checked,
        failures,
        json!({"exhaustive_n": exhaustive_n, "random_samples": opts.samples, "nmax": nmax}),
    )
}

fn run_max(strategy: &mut dyn OnlineStrategy, g: &OrderedGraph) -> Option<(u64, u64)> {
    let run = run_online(
        strategy,
        &g.events(),
        &OptMode::Exact(SolveBudget::default()),
        Objective::Max,
    )
    .ok()?;
    let last = run.trace.last()?;
    Some((last.strategy_value, last.opt_value))
}

/// Greedy is optimal for `n <= 3` and within `floor(n/2)` on random graphs
/// with `n <= 12` in random arrival order.
pub fn verify_greedy_small(opts: VerifyOptions) -> VerifyReport {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=3usize {
        for mask in 0..1u64 << (n * (n - 1) / 2) {
            let g = graph_from_mask(n, mask);
            checked += 1;
            let run = run_online(
                &mut Greedy::new(false),
                &g.events(),
                &OptMode::Exact(SolveBudget::default()),
                Objective::Max,
            );
            match run {
                Ok(r) if r.trace.steps.iter().all(|s| s.ratio == Ratio::ONE) => {}
                _ => failures.push(format!("n={n} mask={mask}: greedy not optimal")),
            }
        }
    }
    failures.extend(collect_failures((0..opts.samples).into_par_iter().map(|i| {
        let mut r = rng(opts.seed.wrapping_mul(7_919).wrapping_add(i));
        let n = 1 + (i as usize % 12);
        let p = EDGE_PROBABILITIES[(i / 12) as usize % 3];
        let g = shuffled(&erdos_renyi(n, p, &mut r), &mut r);
        let Some((gdy, opt)) = run_max(&mut Greedy::new(false), &g) else {
            return Some(format!("sample {i}: run failed"));
        };
        let bound = (n / 2) as u64;
        let ok = if gdy > 0 { opt <= bound * gdy } else { opt == 0 };
        (!ok).then(|| format!("sample {i}: n={n} opt={opt} greedy={gdy}"))
    })));
    checked += opts.samples;
    VerifyReport::new(
        "greedy-small",
        checked,
        failures,
        json!({"random_samples": opts.samples, "nmax": 12}),
    )
}

/// The skeleton adversary against greedy and the always-collect matching
/// strategy for `D = 2, 3, 4`, plus the tight short tentacles.
pub fn verify_skeleton_lemmas() -> VerifyReport {
    let mut failures = Vec::new();
    let mut games = Vec::new();
    let mut checked = 0;
    for d in [2u32, 3, 4] {
        for name in ["greedy", "matching"] {
            let mut strategy: Box<dyn OnlineStrategy> = if name == "greedy" {
                Box::new(Greedy::new(false))
            } else {
                Box::new(Matching::new())
            };
            match play_skeleton(&mut strategy, d, None) {
                Ok(out) => {
                    checked += out.report.subtrees.len() as u64;
                    let g = skeleton_to_graph(&out.tree);
                    let cstar = cstar_partition(&out.tree);
                    match (g, cstar) {
                        (Ok(g), Ok(c)) if c.validate(&g).is_ok() && c.profit() == out.report.o_root => {}
                        _ => failures.push(format!("D={d} {name}: reference partition invalid")),
                    }
                    let r = &out.report;
                    let floor = 6.0 - r.epsilon.unwrap_or(f64::INFINITY);
                    if r.ratio.is_none_or(|x| x < floor - 1e-12) {
                        failures.push(format!("D={d} {name}: ratio {:?} below {floor}", r.ratio));
                    }
                    games.push(json!({
                        "D": d, "strategy": name, "rounds": out.rounds, "stop": out.stop,
                        "nodes": r.nodes, "o_root": r.o_root, "s_root": r.s_root,
                        "ratio": r.ratio, "epsilon": r.epsilon,
                    }));
                }
                Err(e) => failures.push(format!("D={d} {name}: {e}")),
            }
        }
    }
    for s in [1u64, 2] {
        let mut tree = SkeletonTree::new(0);
        let mut collected = BTreeSet::new();
        let mut cur = 0;
        for _ in 0..s {
            let _ = tree.extend(cur);
            collected.insert(cur);
            cur = tree.node(cur).left.unwrap_or(cur);
        }
        match crate::adversary::subtree_report(&tree, &collected) {
            Ok(r) if r.o_root + 2 * s == 6 * r.s_root && r.s_root == s => {}
            Ok(r) => failures.push(format!("tentacle s={s}: O={} S={} not tight", r.o_root, r.s_root)),
            Err(e) => failures.push(format!("tentacle s={s}: {e}")),
        }
        checked += 1;
    }
    VerifyReport::new("skeleton-lemmas", checked, failures, json!({"games": games}))
}

fn run_min(g: &OrderedGraph) -> Option<(u64, u64)> {
    let run = run_online(
        &mut Greedy::new(true),
        &g.events(),
        &OptMode::Exact(SolveBudget::default()),
        Objective::Min,
    )
    .ok()?;
    let last = run.trace.last()?;
    Some((last.strategy_value, last.opt_value))
}

/// Greedy-np on the MinCC nemesis, its `n - 2` bound on random graphs and
/// zero cost on disjoint cliques.
pub fn verify_mincc_bound(opts: VerifyOptions) -> VerifyReport {
    let mut failures = Vec::new();
    for n in 5..=50usize {
        match mincc_nemesis(0, n, &mut Greedy::new(true)) {
            Ok(run) if run.trace.last().map(|s| s.ratio) == Some(Ratio::from_integer(n as u64 - 2)) => {}
            Ok(run) => failures.push(format!("nemesis n={n}: final {:?}", run.trace.last())),
            Err(e) => failures.push(format!("nemesis n={n}: {e}")),
        }
    }
    failures.extend(collect_failures((0..opts.samples).into_par_iter().map(|i| {
        let mut r = rng(opts.seed.wrapping_mul(104_729).wrapping_add(i));
        let n = 1 + (i as usize % 9);
        let p = EDGE_PROBABILITIES[(i / 9) as usize % 3];
        let g = shuffled(&erdos_renyi(n, p, &mut r), &mut r);
        let Some((gdy, opt)) = run_min(&g) else {
            return Some(format!("sample {i}: run failed"));
        };
        let ok = if opt >= 1 {
            gdy <= (n as u64 - 2) * opt
        } else {
            gdy == 0
        };
        (!ok).then(|| format!("sample {i}: n={n} opt={opt} greedy={gdy}"))
    })));
    let clique_samples = (opts.samples / 10).max(100);
    failures.extend(collect_failures((0..clique_samples).into_par_iter().map(|i| {
        let mut r = rng(opts.seed.wrapping_mul(15_485_863).wrapping_add(i));
        let n = 1 + (i as usize % 12);
        let sizes = random_partition_sizes(n, &mut r);
        let g = disjoint_cliques(&sizes, &mut r);
        match run_min(&g) {
            Some((0, 0)) => None,
            other => Some(format!("cliques {sizes:?}: {other:?}")),
        }
    })));
    VerifyReport::new(
        "mincc-bound",
        46 + opts.samples + clique_samples,
        failures,
        json!({"nemesis_n": [5, 50], "random_samples": opts.samples, "clique_samples": clique_samples}),
    )
}
