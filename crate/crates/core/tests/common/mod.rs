//! Oracles written independently of the library's solvers.
#![allow(dead_code)]

use cliquestream::{OrderedGraph, VertexId};

fn pairs(k: u32) -> u64 {
    u64::from(k) * u64::from(k.saturating_sub(1)) / 2
}

/// Optimal clique-partition profit of every prefix `v_0..v_t`, by dynamic
/// programming over vertex subsets: the lowest vertex of a set either sits
/// in a clique with some of its neighbours or alone.
pub fn prefix_optima(g: &OrderedGraph) -> Vec<u64> {
    let n = g.vertex_count();
    assert!(n <= 20, "subset DP is exponential");
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| g.is_adjacent(VertexId::new(u), VertexId::new(v)))
                .fold(0u32, |m, u| m | 1 << u)
        })
        .collect();
    let full = 1usize << n;
    let mut clique = vec![true; full];
    for s in 1..full {
        let top = 31 - (s as u32).leading_zeros();
        let rest = s & !(1 << top);
        clique[s] = clique[rest] && (rest as u32 & !adj[top as usize]) == 0;
    }
    let mut best = vec![0u64; full];
    for mask in 1..full {
        let low = mask.trailing_zeros();
        let rest = mask & !(1 << low);
        let cand = rest & adj[low as usize] as usize;
        let mut sub = cand;
        let mut b = 0;
        loop {
            if clique[sub] {
                b = b.max(pairs(sub.count_ones() + 1) + best[rest & !sub]);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & cand;
        }
        best[mask] = b;
    }
    (1..=n).map(|t| best[(1 << t) - 1]).collect()
}

pub fn optimum(g: &OrderedGraph) -> u64 {
    prefix_optima(g).last().copied().unwrap_or(0)
}

/// `10^6 F(a, b, k/1000)` in exact integer arithmetic.
pub fn profvalue_scaled(a: i128, b: i128, k: i128) -> i128 {
    (1000 * b - a * k).pow(2) + a * k * (2000 - k) - 1_000_000 * b
}
