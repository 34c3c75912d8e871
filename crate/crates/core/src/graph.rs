//! Undirected, unweighted graphs where every node carries a majority/minority
//! label.
//!
//! Node identifiers are dense integers `0..node_count` assigned in insertion
//! order, so graphs built by the growth models implicitly record arrival time
//! in the id. Adjacency is kept as sorted neighbor lists with set semantics
//! enforced at insertion: self-loops and parallel edges are rejected.
//!
//! A graph is mutated only while it is being built (single writer); afterwards
//! every operation takes `&self` and the graph can be shared freely across
//! threads.

use std::collections::VecDeque;

use thiserror::Error;

/// Dense node identifier. Generated graphs assign ids in arrival order.
pub type NodeId = usize;

/// Group membership of a node. The minority group makes up less than half of
/// the network in every model configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    Majority,
    Minority,
}

impl Group {
    /// Short token used in file formats and reports.
    pub fn token(self) -> &'static str {
        match self {
            Group::Majority => "maj",
            Group::Minority => "min",
        }
    }

    /// Inverse of [`Group::token`]. Returns `None` for unknown tokens.
    pub fn from_token(token: &str) -> Option<Group> {
        match token {
            "maj" => Some(Group::Majority),
            "min" => Some(Group::Minority),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range: graph has {node_count} nodes")]
    InvalidNode { node: NodeId, node_count: usize },
    #[error("self-loop on node {0} rejected")]
    SelfLoop(NodeId),
    #[error("duplicate edge {0}-{1} rejected")]
    DuplicateEdge(NodeId, NodeId),
}

/// Node and edge counts broken down by group membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GroupTally {
    pub n_maj: usize,
    pub n_min: usize,
    /// Majority-majority edges.
    pub e_mm: usize,
    /// Minority-minority edges.
    pub e_nn: usize,
    /// Inter-group edges.
    pub e_cross: usize,
}

/// Undirected unweighted graph with one group label per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    groups: Vec<Group>,
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Default for LabeledGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl LabeledGraph {
    pub fn new() -> Self {
        LabeledGraph {
            groups: Vec::new(),
            adjacency: Vec::new(),
            edge_count: 0,
        }
    }

    pub fn with_capacity(nodes: usize) -> Self {
        LabeledGraph {
            groups: Vec::with_capacity(nodes),
            adjacency: Vec::with_capacity(nodes),
            edge_count: 0,
        }
    }

    /// Appends a node and returns its id (`node_count` before the call).
    pub fn add_node(&mut self, group: Group) -> NodeId {
        self.groups.push(group);
        self.adjacency.push(Vec::new());
        self.groups.len() - 1
    }

    /// Inserts the undirected edge `{a, b}`, keeping neighbor lists sorted.
    ///
    /// Rejects self-loops, endpoints that do not exist, and edges already
    /// present.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        self.check_node(a)?;
        self.check_node(b)?;
        let pos_a = match self.adjacency[a].binary_search(&b) {
            Ok(_) => return Err(GraphError::DuplicateEdge(a, b)),
            Err(pos) => pos,
        };
        let pos_b = self.adjacency[b]
            .binary_search(&a)
            .expect_err("adjacency must stay symmetric");
        self.adjacency[a].insert(pos_a, b);
        self.adjacency[b].insert(pos_b, a);
        self.edge_count += 1;
        Ok(())
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        a < self.node_count() && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn node_count(&self) -> usize {
        self.groups.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Group label of `node`. Panics if the node does not exist.
    pub fn group(&self, node: NodeId) -> Group {
        self.groups[node]
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Sorted neighbor list of `node`. Panics if the node does not exist.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    /// Number of edges incident to `node`.
    pub fn degree(&self, node: NodeId) -> Result<usize, GraphError> {
        self.check_node(node)?;
        Ok(self.adjacency[node].len())
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Iterates every edge once as `(a, b)` with `a < b`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, nbrs)| nbrs.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// Node and edge counts per group.
    pub fn group_tally(&self) -> GroupTally {
        let mut tally = GroupTally::default();
        for &g in &self.groups {
            match g {
                Group::Majority => tally.n_maj += 1,
                Group::Minority => tally.n_min += 1,
            }
        }
        for (a, b) in self.edges() {
            match (self.groups[a], self.groups[b]) {
                (Group::Majority, Group::Majority) => tally.e_mm += 1,
                (Group::Minority, Group::Minority) => tally.e_nn += 1,
                _ => tally.e_cross += 1,
            }
        }
        tally
    }

    /// Unweighted shortest-path distances (hops) from `source` to every node.
    /// Unreachable nodes map to `None`.
    pub fn bfs_distances(&self, source: NodeId) -> Result<Vec<Option<u32>>, GraphError> {
        self.check_node(source)?;
        let mut dist = vec![u32::MAX; self.node_count()];
        self.bfs_fill(source, &mut dist);
        Ok(dist
            .into_iter()
            .map(|d| if d == u32::MAX { None } else { Some(d) })
            .collect())
    }

    /// BFS into a caller-owned buffer using `u32::MAX` as the unreachable
    /// marker. The buffer must already have length `node_count`. Returns the
    /// number of reached nodes (including the source).
    pub(crate) fn bfs_fill(&self, source: NodeId, dist: &mut [u32]) -> usize {
        debug_assert_eq!(dist.len(), self.node_count());
        for d in dist.iter_mut() {
            *d = u32::MAX;
        }
        dist[source] = 0;
        let mut reached = 1;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.adjacency[u] {
                if dist[v] == u32::MAX {
                    dist[v] = next;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count() == 0 {
            return true;
        }
        let mut dist = vec![u32::MAX; self.node_count()];
        self.bfs_fill(0, &mut dist) == self.node_count()
    }

    /// Induced subgraph on the largest connected component.
    ///
    /// Ties are broken toward the component containing the smallest original
    /// node id. Surviving nodes are re-indexed densely, preserving the
    /// relative order of their original ids; group labels carry over.
    pub fn largest_connected_component(&self) -> LabeledGraph {
        let n = self.node_count();
        if n == 0 {
            return LabeledGraph::new();
        }
        // Component ids in discovery order; scanning nodes ascending means the
        // first component of maximal size is also the one with the smallest
        // minimum original id.
        let mut component = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0;
            let mut queue = VecDeque::new();
            component[start] = id;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in &self.adjacency[u] {
                    if component[v] == usize::MAX {
                        component[v] = id;
                        queue.push_back(v);
                    }
                }
            }
            sizes.push(size);
        }
        let best = sizes
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.cmp(b).then(ib.cmp(ia)))
            .map(|(i, _)| i)
            .expect("at least one component");

        let mut remap = vec![usize::MAX; n];
        let mut lcc = LabeledGraph::with_capacity(sizes[best]);
        for u in 0..n {
            if component[u] == best {
                remap[u] = lcc.add_node(self.groups[u]);
            }
        }
        for (a, b) in self.edges() {
            if component[a] == best {
                lcc.add_edge(remap[a], remap[b])
                    .expect("edges of a component are unique");
            }
        }
        lcc
    }

    fn check_node(&self, node: NodeId) -> Result<(), GraphError> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::InvalidNode {
                node,
                node_count: self.node_count(),
            })
        }
    }
}

/// Builds a graph from group labels and an edge list; convenient in tests.
pub fn graph_from_edges(groups: &[Group], edges: &[(NodeId, NodeId)]) -> LabeledGraph {
    let mut g = LabeledGraph::with_capacity(groups.len());
    for &group in groups {
        g.add_node(group);
    }
    for &(a, b) in edges {
        g.add_edge(a, b).expect("test edge list must be valid");
    }
    g
}
