//! Competitive-analysis workbench for online clique clustering.
//!
//! Vertices of a graph arrive one at a time together with their edges to
//! earlier vertices. An online strategy keeps a partition of the revealed
//! vertices into cliques and may only open singletons and merge clusters.
//! This crate provides
//!
//! - the graph and clustering model with the profit (MaxCC) and cost (MinCC)
//!   objectives ([`graph`], [`clustering`], [`ratio`]);
//! - an exact offline optimum ([`solver`]);
//! - the Greedy and phase-doubling OCC strategies ([`strategy`]);
//! - lower-bound instance generators, including the adaptive skeleton-tree
//!   adversary ([`adversary`]);
//! - the numeric side of the OCC analysis ([`analysis`]);
//! - experiment plumbing shared by the CLI ([`harness`], [`verify`]).

pub mod adversary;
pub mod analysis;
pub mod clustering;
pub mod format;
pub mod graph;
pub mod harness;
pub mod random;
pub mod ratio;
pub mod solver;
pub mod strategy;
pub mod verify;

pub use clustering::{ClusterError, ClusterId, Clustering};
pub use graph::{ArrivalEvent, GraphError, OrderedGraph, VertexId};
pub use ratio::{Objective, Ratio, RatioTrace, StepRecord};
pub use solver::{OptimalResult, SolveBudget, SolveError};
pub use strategy::{run_online, OnlineStrategy, OptMode, RunOutcome, StrategyError};
