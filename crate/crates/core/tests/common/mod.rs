#![allow(dead_code)]

use fairnet_core::graph::{Group, LabeledGraph, NodeId};
use rand::Rng;

/// Checks the structural invariants every graph in this crate must satisfy:
/// symmetric sorted adjacency without self-loops or duplicates, one label
/// per node, and a consistent edge count.
pub fn assert_graph_invariants(g: &LabeledGraph) {
    assert_eq!(g.groups().len(), g.node_count());
    let mut half_edges = 0usize;
    for v in g.nodes() {
        let nbrs = g.neighbors(v);
        half_edges += nbrs.len();
        for w in nbrs.windows(2) {
            assert!(w[0] < w[1], "adjacency of {v} not sorted/unique");
        }
        for &u in nbrs {
            assert_ne!(u, v, "self-loop at {v}");
            assert!(
                g.neighbors(u).binary_search(&v).is_ok(),
                "edge {v}-{u} not symmetric"
            );
        }
    }
    assert_eq!(half_edges % 2, 0);
    assert_eq!(g.edge_count(), half_edges / 2);
}

/// Random graph with up to `max_nodes` nodes: random labels, each pair an
/// edge with probability `edge_prob`.
pub fn random_graph(rng: &mut impl Rng, max_nodes: usize, edge_prob: f64) -> LabeledGraph {
    let n = rng.gen_range(1..=max_nodes);
    let mut g = LabeledGraph::with_capacity(n);
    for _ in 0..n {
        let group = if rng.gen_bool(0.3) {
            Group::Minority
        } else {
            Group::Majority
        };
        g.add_node(group);
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen::<f64>() < edge_prob {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

/// All-pairs shortest paths by Floyd-Warshall; the independent oracle for
/// BFS-based distances.
pub fn floyd_warshall(g: &LabeledGraph) -> Vec<Vec<Option<u64>>> {
    let n = g.node_count();
    let inf = u64::MAX / 4;
    let mut dist = vec![vec![inf; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (a, b) in g.edges() {
        dist[a][b] = 1;
        dist[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|d| if d >= inf { None } else { Some(d) })
                .collect()
        })
        .collect()
}

/// Component sizes derived from the Floyd-Warshall reachability relation.
pub fn component_sizes_by_reachability(g: &LabeledGraph) -> Vec<usize> {
    let dist = floyd_warshall(g);
    let n = g.node_count();
    let mut assigned = vec![false; n];
    let mut sizes = Vec::new();
    for v in 0..n {
        if assigned[v] {
            continue;
        }
        let members: Vec<NodeId> = (0..n).filter(|&u| dist[v][u].is_some()).collect();
        for &u in &members {
            assigned[u] = true;
        }
        sizes.push(members.len());
    }
    sizes
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard error of the mean.
pub fn stderr(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}
