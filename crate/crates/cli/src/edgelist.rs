//! The tab-separated graph file format and its ingestion pipeline.
//!
//! Layout (UTF-8, LF line endings):
//!
//! ```text
//! fairnet-graph 1
//! <node-id>\t<group>        one line per node; group is "maj" or "min"
//! <node-id>\t<node-id>      one line per edge, after all node lines
//! ```
//!
//! Node ids may be arbitrary non-negative integers; ingestion re-indexes
//! them densely in ascending order of the original id. Self-loops, duplicate
//! edges, duplicate node ids, and edges with undeclared endpoints are
//! rejected with a line number and a stable diagnostic code. With
//! `drop_unlabeled`, nodes whose group token is unrecognized are removed
//! together with their incident edges instead of failing the parse.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use fairnet_core::graph::{Group, LabeledGraph};

pub const HEADER: &str = "fairnet-graph 1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line 1: expected header \"{HEADER}\"")]
    BadHeader,
    #[error("line {line}: expected two tab-separated fields")]
    MalformedLine { line: usize },
    #[error("line {line}: unknown group token \"{token}\"")]
    UnknownGroup { line: usize, token: String },
    #[error("line {line}: node id {id} declared twice")]
    DuplicateNode { line: usize, id: u64 },
    #[error("line {line}: node line after the edge section")]
    NodeAfterEdges { line: usize },
    #[error("line {line}: self-loop on node {id}")]
    SelfLoop { line: usize, id: u64 },
    #[error("line {line}: duplicate edge {a}-{b}")]
    DuplicateEdge { line: usize, a: u64, b: u64 },
    #[error("line {line}: edge references undeclared node {id}")]
    DanglingEndpoint { line: usize, id: u64 },
    #[error("graph is empty after filtering")]
    EmptyResult,
}

impl ParseError {
    /// Stable machine-readable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::BadHeader => "bad-header",
            ParseError::MalformedLine { .. } => "malformed-line",
            ParseError::UnknownGroup { .. } => "unknown-group",
            ParseError::DuplicateNode { .. } => "duplicate-node",
            ParseError::NodeAfterEdges { .. } => "node-after-edges",
            ParseError::SelfLoop { .. } => "self-loop",
            ParseError::DuplicateEdge { .. } => "duplicate-edge",
            ParseError::DanglingEndpoint { .. } => "dangling-endpoint",
            ParseError::EmptyResult => "empty-result",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IngestOptions {
    /// Remove nodes with unrecognized group tokens (and their edges) instead
    /// of failing.
    pub drop_unlabeled: bool,
    /// Reduce the result to its largest connected component.
    pub take_lcc: bool,
}

/// What ingestion did to the file, for reporting and the run manifest.
#[derive(Debug, Clone, Default, Serialize)]
pub struct IngestReport {
    pub nodes_declared: usize,
    pub nodes_dropped_unlabeled: usize,
    pub edges_declared: usize,
    pub edges_dropped_unlabeled: usize,
    pub component_count: usize,
    pub largest_component: usize,
    pub took_lcc: bool,
    pub final_nodes: usize,
    pub final_edges: usize,
    pub final_minority: usize,
}

/// Parses a graph file, applying the ingest options. Returns the dense
/// re-indexed graph and a report of everything dropped along the way.
pub fn parse_graph(text: &str, options: IngestOptions) -> Result<(LabeledGraph, IngestReport), ParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == HEADER => {}
        _ => return Err(ParseError::BadHeader),
    }

    // Original id -> group (None = unlabeled, kept only to resolve edges).
    let mut declared: BTreeMap<u64, Option<Group>> = BTreeMap::new();
    let mut edges: Vec<(u64, u64)> = Vec::new();
    let mut seen_edges: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut in_edge_section = false;
    let mut report = IngestReport::default();

    for (index, raw) in lines {
        let line = index + 1;
        let mut fields = raw.split('\t');
        let (first, second) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => (a, b),
            _ => return Err(ParseError::MalformedLine { line }),
        };
        let id: u64 = first
            .parse()
            .map_err(|_| ParseError::MalformedLine { line })?;
        if let Ok(other) = second.parse::<u64>() {
            // Edge line.
            in_edge_section = true;
            report.edges_declared += 1;
            if id == other {
                return Err(ParseError::SelfLoop { line, id });
            }
            let (a, b) = (id.min(other), id.max(other));
            for &endpoint in &[a, b] {
                if !declared.contains_key(&endpoint) {
                    return Err(ParseError::DanglingEndpoint { line, id: endpoint });
                }
            }
            if !seen_edges.insert((a, b)) {
                return Err(ParseError::DuplicateEdge { line, a, b });
            }
            edges.push((a, b));
        } else {
            // Node line.
            if in_edge_section {
                return Err(ParseError::NodeAfterEdges { line });
            }
            report.nodes_declared += 1;
            let group = match Group::from_token(second) {
                Some(g) => Some(g),
                None if options.drop_unlabeled => {
                    report.nodes_dropped_unlabeled += 1;
                    None
                }
                None => {
                    return Err(ParseError::UnknownGroup {
                        line,
                        token: second.to_string(),
                    })
                }
            };
            if declared.insert(id, group).is_some() {
                return Err(ParseError::DuplicateNode { line, id });
            }
        }
    }

    // Dense re-index over labeled nodes, ascending original id.
    let mut graph = LabeledGraph::with_capacity(declared.len());
    let mut index_of: BTreeMap<u64, usize> = BTreeMap::new();
    for (&id, &group) in &declared {
        if let Some(group) = group {
            index_of.insert(id, graph.add_node(group));
        }
    }
    for &(a, b) in &edges {
        match (index_of.get(&a), index_of.get(&b)) {
            (Some(&ia), Some(&ib)) => {
                graph
                    .add_edge(ia, ib)
                    .expect("duplicates and loops were rejected above");
            }
            _ => report.edges_dropped_unlabeled += 1,
        }
    }
    if graph.node_count() == 0 {
        return Err(ParseError::EmptyResult);
    }

    let sizes = component_sizes(&graph);
    report.component_count = sizes.len();
    report.largest_component = sizes.iter().copied().max().unwrap_or(0);
    let graph = if options.take_lcc {
        report.took_lcc = true;
        graph.largest_connected_component()
    } else {
        graph
    };
    report.final_nodes = graph.node_count();
    report.final_edges = graph.edge_count();
    report.final_minority = graph.group_tally().n_min;
    Ok((graph, report))
}

fn component_sizes(graph: &LabeledGraph) -> Vec<usize> {
    let mut seen = vec![false; graph.node_count()];
    let mut sizes = Vec::new();
    for start in graph.nodes() {
        if seen[start] {
            continue;
        }
        let dist = graph.bfs_distances(start).expect("valid node");
        let mut size = 0;
        for v in graph.nodes() {
            if dist[v].is_some() {
                seen[v] = true;
                size += 1;
            }
        }
        sizes.push(size);
    }
    sizes
}

/// Serializes a graph in the canonical form `parse_graph` accepts: dense ids,
/// nodes ascending, edges ascending with the smaller endpoint first. Writing
/// and re-ingesting a graph is byte-stable.
pub fn write_graph(graph: &LabeledGraph) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for v in graph.nodes() {
        writeln!(out, "{v}\t{}", graph.group(v).token()).expect("string write");
    }
    for (a, b) in graph.edges() {
        writeln!(out, "{a}\t{b}").expect("string write");
    }
    out
}
