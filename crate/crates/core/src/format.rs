//! Text instance files.
//!
//! One arrival per line, ids 1-based and in order:
//!
//! ```text
//! # a triangle
//! v 1 :
//! v 2 : 1
//! v 3 : 1 2
//! ```
//!
//! Blank lines and `#` comments are ignored. [`write_instance`] emits the
//! canonical form: no comments, neighbor lists ascending, single spaces.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{ArrivalEvent, GraphError, OrderedGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_label(token: &str, line: usize) -> Result<VertexId, FormatError> {
    let label: u64 = token
        .parse()
        .map_err(|_| syntax(line, format!("`{token}` is not a vertex id")))?;
    if label == 0 || label > u64::from(u32::MAX) {
        return Err(syntax(line, format!("vertex id {label} out of range")));
    }
    Ok(VertexId((label - 1) as u32))
}

/// Parses an instance and checks arrival order and back-edge direction.
pub fn parse_instance(text: &str) -> Result<Vec<ArrivalEvent>, FormatError> {
    let mut graph = OrderedGraph::new();
    let mut events = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (head, tail) = content.split_once(':').ok_or_else(|| syntax(line, "missing `:`"))?;
        let mut head = head.split_whitespace();
        if head.next() != Some("v") {
            return Err(syntax(line, "arrival lines start with `v`"));
        }
        let vertex = parse_label(head.next().ok_or_else(|| syntax(line, "missing vertex id"))?, line)?;
        if let Some(extra) = head.next() {
            return Err(syntax(line, format!("unexpected `{extra}` before `:`")));
        }
        let neighbors = tail
            .split_whitespace()
            .map(|t| parse_label(t, line))
            .collect::<Result<Vec<_>, _>>()?;
        let event = ArrivalEvent::new(vertex, neighbors);
        graph
            .add_vertex(&event)
            .map_err(|source| FormatError::Graph { line, source })?;
        events.push(event);
    }
    Ok(events)
}

pub fn parse_graph(text: &str) -> Result<OrderedGraph, FormatError> {
    let events = parse_instance(text)?;
    Ok(OrderedGraph::from_events(&events).expect("parse_instance validated the arrivals"))
}

/// Canonical text form of an arrival sequence.
pub fn write_instance(events: &[ArrivalEvent]) -> String {
    let mut out = String::new();
    for event in events {
        let mut nbrs = event.back_neighbors.clone();
        nbrs.sort_unstable();
        nbrs.dedup();
        write!(out, "v {} :", event.vertex).unwrap();
        for u in nbrs {
            write!(out, " {u}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_graph(graph: &OrderedGraph) -> String {
    write_instance(&graph.events())
}
