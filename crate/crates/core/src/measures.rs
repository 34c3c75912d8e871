//! Structural and group-equality statistics of a labeled graph.
//!
//! Covers three families:
//!
//! - mixing: per-group dyadicity and heterophilicity (observed same-group /
//!   cross-group edge counts over their random-mixing expectations);
//! - distance: average shortest path length and diameter, exact via
//!   all-source BFS or estimated from sampled sources on large graphs;
//! - degree equality ("social capital"): 1-D earth mover distance between
//!   the group degree distributions, power inequality (mean-degree ratio),
//!   and moment glass ceiling (second-moment ratio).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Group, GroupTally, LabeledGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("measure undefined: {0}")]
    Undefined(String),
    #[error("distance statistics require a connected graph")]
    Disconnected,
}

fn undefined(msg: &str) -> MeasureError {
    MeasureError::Undefined(msg.to_string())
}

/// Per-group dyadicity and the heterophilicity of the graph.
///
/// With edge density `p = 2E / (N (N - 1))`, the dyadicity of group `g` is
/// `e_gg / (C(n_g, 2) p)` and heterophilicity is
/// `e_cross / (n_maj n_min p)`. Under random mixing all three are close
/// to 1.
pub fn dyadicity_heterophilicity(graph: &LabeledGraph) -> Result<(f64, f64, f64), MeasureError> {
    let n = graph.node_count();
    if n < 2 {
        return Err(undefined("dyadicity needs at least 2 nodes"));
    }
    if graph.edge_count() == 0 {
        return Err(undefined("dyadicity needs at least 1 edge"));
    }
    let tally = graph.group_tally();
    if tally.n_maj == 0 || tally.n_min == 0 {
        return Err(undefined("dyadicity needs both groups non-empty"));
    }
    let p = 2.0 * graph.edge_count() as f64 / (n as f64 * (n - 1) as f64);
    let expected_within = |count: usize| count as f64 * (count as f64 - 1.0) / 2.0 * p;
    let exp_mm = expected_within(tally.n_maj);
    let exp_nn = expected_within(tally.n_min);
    let exp_cross = tally.n_maj as f64 * tally.n_min as f64 * p;
    if exp_mm == 0.0 || exp_nn == 0.0 {
        return Err(undefined("dyadicity needs at least 2 nodes in each group"));
    }
    Ok((
        tally.e_mm as f64 / exp_mm,
        tally.e_nn as f64 / exp_nn,
        tally.e_cross as f64 / exp_cross,
    ))
}

/// Average shortest path length (hops, unordered pairs) and diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceStats {
    pub avg_shortest_path: f64,
    pub diameter: u32,
    /// True when the stats come from sampled sources; the diameter is then
    /// only a lower bound.
    pub sampled: bool,
}

/// Exact distance statistics via BFS from every node.
pub fn distance_stats(graph: &LabeledGraph) -> Result<DistanceStats, MeasureError> {
    let n = graph.node_count();
    if n < 2 {
        return Err(undefined("distance statistics need at least 2 nodes"));
    }
    if !graph.is_connected() {
        return Err(MeasureError::Disconnected);
    }
    let (sum, diameter) = (0..n)
        .into_par_iter()
        .map(|source| {
            let mut dist = vec![u32::MAX; n];
            graph.bfs_fill(source, &mut dist);
            let mut sum = 0u64;
            let mut max = 0u32;
            for &d in &dist {
                sum += u64::from(d);
                max = max.max(d);
            }
            (sum, max)
        })
        .reduce(|| (0, 0), |(s1, m1), (s2, m2)| (s1 + s2, m1.max(m2)));
    // Each unordered pair was counted twice.
    let pairs = n as f64 * (n - 1) as f64;
    Ok(DistanceStats {
        avg_shortest_path: sum as f64 / pairs,
        diameter,
        sampled: false,
    })
}

/// Distance statistics estimated from `sources` uniformly sampled BFS roots.
///
/// The average is unbiased; the diameter is reported as the largest observed
/// distance and flagged as a lower bound via `sampled`.
pub fn distance_stats_sampled(
    graph: &LabeledGraph,
    sources: usize,
    seed: u64,
) -> Result<DistanceStats, MeasureError> {
    let n = graph.node_count();
    if n < 2 {
        return Err(undefined("distance statistics need at least 2 nodes"));
    }
    if sources == 0 {
        return Err(undefined("sampled distance statistics need at least 1 source"));
    }
    if !graph.is_connected() {
        return Err(MeasureError::Disconnected);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sources = rand::seq::index::sample(&mut rng, n, sources.min(n)).into_vec();
    let (sum, diameter) = sources
        .par_iter()
        .map(|&source| {
            let mut dist = vec![u32::MAX; n];
            graph.bfs_fill(source, &mut dist);
            let mut sum = 0u64;
            let mut max = 0u32;
            for &d in &dist {
                sum += u64::from(d);
                max = max.max(d);
            }
            (sum, max)
        })
        .reduce(|| (0, 0), |(s1, m1), (s2, m2)| (s1 + s2, m1.max(m2)));
    let pairs = sources.len() as f64 * (n - 1) as f64;
    Ok(DistanceStats {
        avg_shortest_path: sum as f64 / pairs,
        diameter,
        sampled: true,
    })
}

/// Exact 1-D Wasserstein-1 distance between two empirical distributions,
/// each sample weighted `1/len`.
///
/// Computed as the integral of the absolute CDF difference over the merged
/// support.
pub fn wasserstein_1d(mut xs: Vec<f64>, mut ys: Vec<f64>) -> f64 {
    assert!(!xs.is_empty() && !ys.is_empty(), "empty distribution");
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    let mut merged: Vec<f64> = xs.iter().chain(ys.iter()).copied().collect();
    merged.sort_unstable_by(f64::total_cmp);
    let (mut ix, mut iy) = (0usize, 0usize);
    let mut distance = 0.0;
    for window in merged.windows(2) {
        let (x, next) = (window[0], window[1]);
        while ix < xs.len() && xs[ix] <= x {
            ix += 1;
        }
        while iy < ys.len() && ys[iy] <= x {
            iy += 1;
        }
        let fx = ix as f64 / xs.len() as f64;
        let fy = iy as f64 / ys.len() as f64;
        distance += (fx - fy).abs() * (next - x);
    }
    distance
}

fn group_degrees(graph: &LabeledGraph, group: Group) -> Vec<f64> {
    graph
        .nodes()
        .filter(|&v| graph.group(v) == group)
        .map(|v| graph.neighbors(v).len() as f64)
        .collect()
}

/// Earth mover distance between the minority and majority degree
/// distributions, in raw degree units. 0 iff the two empirical
/// distributions are identical.
pub fn degree_emd(graph: &LabeledGraph) -> Result<f64, MeasureError> {
    let maj = group_degrees(graph, Group::Majority);
    let min = group_degrees(graph, Group::Minority);
    if maj.is_empty() || min.is_empty() {
        return Err(undefined("degree EMD needs both groups non-empty"));
    }
    Ok(wasserstein_1d(maj, min))
}

/// Power inequality `PI = mean(d_min) / mean(d_maj)` and moment glass
/// ceiling `g = E(d_min^2) / E(d_maj^2)`. Both are 1 for identically
/// distributed groups; lower values disadvantage the minority.
pub fn power_and_ceiling(graph: &LabeledGraph) -> Result<(f64, f64), MeasureError> {
    let maj = group_degrees(graph, Group::Majority);
    let min = group_degrees(graph, Group::Minority);
    if maj.is_empty() || min.is_empty() {
        return Err(undefined("degree ratios need both groups non-empty"));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let second = |v: &[f64]| v.iter().map(|d| d * d).sum::<f64>() / v.len() as f64;
    let mean_maj = mean(&maj);
    let second_maj = second(&maj);
    if mean_maj == 0.0 || second_maj == 0.0 {
        return Err(undefined("majority group has no edges"));
    }
    Ok((mean(&min) / mean_maj, second(&min) / second_maj))
}

/// Controls how [`MeasureReport::compute`] evaluates distance statistics.
#[derive(Debug, Clone, Copy)]
pub struct MeasureOptions {
    /// Graphs up to this many nodes get exact all-source BFS.
    pub exact_distance_limit: usize,
    /// Source count for the sampled estimate above the limit.
    pub sample_sources: usize,
    /// Seed for the source sample.
    pub distance_seed: u64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            exact_distance_limit: 20_000,
            sample_sources: 1000,
            distance_seed: 0,
        }
    }
}

/// Every structural and equality statistic of one graph, as a flat record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub nodes: usize,
    pub edges: usize,
    pub n_maj: usize,
    pub n_min: usize,
    pub e_mm: usize,
    pub e_nn: usize,
    pub e_cross: usize,
    pub avg_degree_maj: f64,
    pub avg_degree_min: f64,
    pub max_degree_maj: usize,
    pub max_degree_min: usize,
    pub dyadicity_maj: f64,
    pub dyadicity_min: f64,
    pub heterophilicity: f64,
    pub avg_shortest_path: f64,
    pub diameter: u32,
    /// Distance stats were computed on the largest connected component.
    pub distances_on_lcc: bool,
    /// Distance stats come from sampled sources; diameter is a lower bound.
    pub distances_sampled: bool,
    pub emd: f64,
    pub power_inequality: f64,
    pub glass_ceiling: f64,
}

impl MeasureReport {
    pub fn compute(graph: &LabeledGraph, options: &MeasureOptions) -> Result<Self, MeasureError> {
        let tally: GroupTally = graph.group_tally();
        let maj = group_degrees(graph, Group::Majority);
        let min = group_degrees(graph, Group::Minority);
        if maj.is_empty() || min.is_empty() {
            return Err(undefined("report needs both groups non-empty"));
        }
        let (dyadicity_maj, dyadicity_min, heterophilicity) = dyadicity_heterophilicity(graph)?;
        let (power_inequality, glass_ceiling) = power_and_ceiling(graph)?;
        let emd = degree_emd(graph)?;

        let connected = graph.is_connected();
        let lcc;
        let distance_graph = if connected {
            graph
        } else {
            lcc = graph.largest_connected_component();
            &lcc
        };
        let distances = if distance_graph.node_count() <= options.exact_distance_limit {
            distance_stats(distance_graph)?
        } else {
            distance_stats_sampled(distance_graph, options.sample_sources, options.distance_seed)?
        };

        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let max = |v: &[f64]| v.iter().copied().fold(0.0f64, f64::max) as usize;
        Ok(MeasureReport {
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            n_maj: tally.n_maj,
            n_min: tally.n_min,
            e_mm: tally.e_mm,
            e_nn: tally.e_nn,
            e_cross: tally.e_cross,
            avg_degree_maj: mean(&maj),
            avg_degree_min: mean(&min),
            max_degree_maj: max(&maj),
            max_degree_min: max(&min),
            dyadicity_maj,
            dyadicity_min,
            heterophilicity,
            avg_shortest_path: distances.avg_shortest_path,
            diameter: distances.diameter,
            distances_on_lcc: !connected,
            distances_sampled: distances.sampled,
            emd,
            power_inequality,
            glass_ceiling,
        })
    }
}
