//! Growth models for two-group networks.
//!
//! All models grow from the same two-node seed (one majority node linked to
//! one minority node) and add one node per step. An arriving node draws its
//! group label (minority with probability `minority_fraction`) and connects
//! to existing nodes through up to two mechanisms:
//!
//! 1. Homophilic preferential attachment: candidate `i` is chosen with
//!    probability proportional to `h_eff * d_i^alpha`, where `h_eff` is the
//!    homophily parameter `h` for same-group candidates and `1 - h`
//!    otherwise.
//! 2. Diversified linking: after the attachment step, extra links go to
//!    neighbors of the just-chosen targets, preferring opposite-group
//!    candidates (probability factor `p_d` vs `1 - p_d`) with degree close
//!    to the degree of the target they were reached through.
//!
//! The named model presets are parameter pins of these two mechanisms; see
//! [`ModelPreset`].

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Group, LabeledGraph, NodeId};
use crate::seeds;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    /// Every candidate weight is zero, so the categorical draw has no support.
    #[error("attachment weights have empty support")]
    EmptySupport,
}

/// The named growth models. Each preset pins a subset of the parameters;
/// the remaining ones are free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelPreset {
    /// Uniform attachment: `h = 0.5`, `alpha = 0`, no diversified links.
    RandomNetwork,
    /// Preferential attachment only: `h = 0.5`, no diversified links.
    Ba,
    /// Homophily only: `alpha = 0`, no diversified links.
    RandomHomophily,
    /// Homophily plus preferential attachment; no diversified links.
    HomophilyBa,
    /// Homophily plus diversified links, no preferential attachment
    /// (`alpha = 0`).
    DiversifiedHomophily,
    /// Homophily, preferential attachment, and diversified links.
    DiversifiedHomophilyBa,
}

impl ModelPreset {
    pub const ALL: [ModelPreset; 6] = [
        ModelPreset::RandomNetwork,
        ModelPreset::Ba,
        ModelPreset::RandomHomophily,
        ModelPreset::HomophilyBa,
        ModelPreset::DiversifiedHomophily,
        ModelPreset::DiversifiedHomophilyBa,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ModelPreset::RandomNetwork => "random-network",
            ModelPreset::Ba => "ba",
            ModelPreset::RandomHomophily => "random-homophily",
            ModelPreset::HomophilyBa => "homophily-ba",
            ModelPreset::DiversifiedHomophily => "diversified-homophily",
            ModelPreset::DiversifiedHomophilyBa => "diversified-homophily-ba",
        }
    }

    pub fn from_token(token: &str) -> Option<ModelPreset> {
        ModelPreset::ALL.into_iter().find(|p| p.token() == token)
    }

    /// Whether the preset uses the diversified-link mechanism.
    pub fn is_diversified(self) -> bool {
        matches!(
            self,
            ModelPreset::DiversifiedHomophily | ModelPreset::DiversifiedHomophilyBa
        )
    }

    /// Forces the parameters this preset pins; free parameters are left as
    /// they are.
    pub fn apply_pins(self, config: &mut GeneratorConfig) {
        config.preset = self;
        match self {
            ModelPreset::RandomNetwork => {
                config.homophily = 0.5;
                config.alpha = 0.0;
                config.diversified_links = 0;
            }
            ModelPreset::Ba => {
                config.homophily = 0.5;
                config.diversified_links = 0;
            }
            ModelPreset::RandomHomophily => {
                config.alpha = 0.0;
                config.diversified_links = 0;
            }
            ModelPreset::HomophilyBa => {
                config.diversified_links = 0;
            }
            ModelPreset::DiversifiedHomophily => {
                config.alpha = 0.0;
            }
            ModelPreset::DiversifiedHomophilyBa => {}
        }
    }
}

/// All growth parameters of one model configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub preset: ModelPreset,
    /// Target node count `N`.
    pub n: usize,
    /// Minority fraction `m`, strictly between 0 and 0.5.
    pub minority_fraction: f64,
    /// Links `l` each arriving node tries to form.
    pub links_per_node: usize,
    /// Homophily `h` in `[0, 1]`; 0.5 is random mixing, 1 perfectly
    /// homophilic.
    pub homophily: f64,
    /// Preferential-attachment exponent; 0 disables degree preference.
    pub alpha: f64,
    /// Of the `links_per_node` links, how many are diversified (`l_d`).
    pub diversified_links: usize,
    /// Diversification probability `p_d`: weight factor for opposite-group
    /// candidates in the diversified step (same-group get `1 - p_d`).
    pub diversification: f64,
    pub rng_seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            preset: ModelPreset::HomophilyBa,
            n: 5000,
            minority_fraction: 0.2,
            links_per_node: 2,
            homophily: 0.8,
            alpha: 1.0,
            diversified_links: 0,
            diversification: 0.6,
            rng_seed: 0,
        }
    }
}

impl GeneratorConfig {
    /// Copy of this config re-targeted at `preset`, with the preset's pinned
    /// parameters forced.
    pub fn resolved_for(&self, preset: ModelPreset) -> GeneratorConfig {
        let mut config = self.clone();
        preset.apply_pins(&mut config);
        if preset.is_diversified() && config.diversified_links == 0 {
            config.diversified_links = 1;
        }
        config
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let fail = |msg: String| Err(GeneratorError::InvalidConfig(msg));
        if self.n < 2 {
            return fail(format!("n must be at least 2, got {}", self.n));
        }
        if !(self.minority_fraction > 0.0 && self.minority_fraction < 0.5) {
            return fail(format!(
                "minority_fraction must lie strictly between 0 and 0.5, got {}",
                self.minority_fraction
            ));
        }
        if self.links_per_node < 1 {
            return fail("links_per_node must be at least 1".to_string());
        }
        if !(0.0..=1.0).contains(&self.homophily) {
            return fail(format!("homophily must lie in [0, 1], got {}", self.homophily));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return fail(format!("alpha must be finite and >= 0, got {}", self.alpha));
        }
        if self.diversified_links > self.links_per_node {
            return fail(format!(
                "diversified_links ({}) cannot exceed links_per_node ({})",
                self.diversified_links, self.links_per_node
            ));
        }
        if !(0.0..=1.0).contains(&self.diversification) {
            return fail(format!(
                "diversification must lie in [0, 1], got {}",
                self.diversification
            ));
        }
        let pin = |ok: bool, what: &str| -> Result<(), GeneratorError> {
            if ok {
                Ok(())
            } else {
                Err(GeneratorError::InvalidConfig(format!(
                    "preset {} pins {}",
                    self.preset.token(),
                    what
                )))
            }
        };
        match self.preset {
            ModelPreset::RandomNetwork => {
                pin(self.homophily == 0.5, "homophily = 0.5")?;
                pin(self.alpha == 0.0, "alpha = 0")?;
                pin(self.diversified_links == 0, "diversified_links = 0")?;
            }
            ModelPreset::Ba => {
                pin(self.homophily == 0.5, "homophily = 0.5")?;
                pin(self.diversified_links == 0, "diversified_links = 0")?;
            }
            ModelPreset::RandomHomophily => {
                pin(self.alpha == 0.0, "alpha = 0")?;
                pin(self.diversified_links == 0, "diversified_links = 0")?;
            }
            ModelPreset::HomophilyBa => {
                pin(self.diversified_links == 0, "diversified_links = 0")?;
            }
            ModelPreset::DiversifiedHomophily => {
                pin(self.alpha == 0.0, "alpha = 0")?;
                pin(self.diversified_links >= 1, "diversified_links >= 1")?;
            }
            ModelPreset::DiversifiedHomophilyBa => {
                pin(self.diversified_links >= 1, "diversified_links >= 1")?;
            }
        }
        Ok(())
    }
}

/// Counters for the degenerate growth events; all zero on typical
/// configurations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GrowthStats {
    /// Arrivals whose very first link had no positively weighted candidate
    /// and fell back to uniform attachment.
    pub uniform_fallback_nodes: usize,
    /// Attachment links dropped because the candidate support emptied
    /// mid-draw (only possible at the homophily extremes h = 0 or h = 1).
    pub skipped_attachment_links: usize,
    /// Diversified links dropped because no eligible candidate remained.
    pub skipped_diversified_links: usize,
}

/// A generated graph together with its growth statistics.
#[derive(Debug, Clone)]
pub struct Generation {
    pub graph: LabeledGraph,
    pub stats: GrowthStats,
}

/// Non-negative attachment weights over an explicit candidate list.
///
/// Probabilities are `weight / total` whenever `total > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttachmentWeights {
    pub candidates: Vec<NodeId>,
    pub weights: Vec<f64>,
}

impl AttachmentWeights {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.total();
        self.weights.iter().map(|w| w / total).collect()
    }

    /// One categorical draw over the candidates (with replacement).
    pub fn sample_one(&self, rng: &mut impl Rng) -> Option<NodeId> {
        draw_index(&self.weights, rng).map(|i| self.candidates[i])
    }
}

/// `d^alpha` with the convention `0^0 = 1`, so `alpha = 0` is uniform
/// attachment even over isolated candidates.
fn degree_factor(degree: usize, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else if alpha == 1.0 {
        degree as f64
    } else {
        (degree as f64).powf(alpha)
    }
}

/// One categorical draw proportional to `weights`; `None` when the support
/// is empty (all weights zero).
fn draw_index(weights: &[f64], rng: &mut impl Rng) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = None;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = Some(i);
            if target < acc {
                return Some(i);
            }
        }
    }
    // Rounding in the partial sums can leave `target` just past the last
    // positive entry.
    last_positive
}

/// Homophilic preferential-attachment weights for a node of group
/// `new_group` over `candidates`: `h_eff(new_group, g_i) * d_i^alpha`.
///
/// Errors with [`GeneratorError::EmptySupport`] when every weight is zero
/// (e.g. `h = 1` and no same-group candidate); the grower decides how to
/// fall back.
pub fn homophily_weights(
    graph: &LabeledGraph,
    new_group: Group,
    candidates: &[NodeId],
    homophily: f64,
    alpha: f64,
) -> Result<AttachmentWeights, GeneratorError> {
    if candidates.is_empty() {
        return Err(GeneratorError::EmptySupport);
    }
    let mut weights = Vec::with_capacity(candidates.len());
    let mut total = 0.0;
    for &i in candidates {
        let h_eff = if graph.group(i) == new_group {
            homophily
        } else {
            1.0 - homophily
        };
        let w = h_eff * degree_factor(graph.neighbors(i).len(), alpha);
        total += w;
        weights.push(w);
    }
    if total <= 0.0 {
        return Err(GeneratorError::EmptySupport);
    }
    Ok(AttachmentWeights {
        candidates: candidates.to_vec(),
        weights,
    })
}

/// Diversified-link weights for `new_node` over the neighbors of its anchor
/// set (the targets of its attachment step).
///
/// Candidates are the union of the anchors' neighborhoods minus `new_node`
/// and anything already adjacent to it. Candidate `k` reached through anchor
/// `i` contributes `p_jk * 1 / (|d_k - d_i| + 1)`, summed over all anchors
/// adjacent to `k`, where `p_jk` is `p_d` for opposite-group candidates and
/// `1 - p_d` for same-group ones. The `+ 1` regularizes the equal-degree
/// case, keeping it the most favored.
pub fn diversified_weights(
    graph: &LabeledGraph,
    new_node: NodeId,
    anchors: &[NodeId],
    diversification: f64,
) -> Result<AttachmentWeights, GeneratorError> {
    if anchors.is_empty() {
        return Err(GeneratorError::EmptySupport);
    }
    let new_group = graph.group(new_node);
    let mut candidates: Vec<NodeId> = anchors
        .iter()
        .flat_map(|&i| graph.neighbors(i).iter().copied())
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates.retain(|&k| k != new_node && !graph.has_edge(new_node, k));
    if candidates.is_empty() {
        return Err(GeneratorError::EmptySupport);
    }

    let mut weights = Vec::with_capacity(candidates.len());
    let mut total = 0.0;
    for &k in &candidates {
        let group_factor = if graph.group(k) == new_group {
            1.0 - diversification
        } else {
            diversification
        };
        let d_k = graph.neighbors(k).len() as f64;
        let mut gap_sum = 0.0;
        for &i in anchors {
            if graph.has_edge(i, k) {
                let d_i = graph.neighbors(i).len() as f64;
                gap_sum += 1.0 / ((d_k - d_i).abs() + 1.0);
            }
        }
        let w = group_factor * gap_sum;
        total += w;
        weights.push(w);
    }
    if total <= 0.0 {
        return Err(GeneratorError::EmptySupport);
    }
    Ok(AttachmentWeights {
        candidates,
        weights,
    })
}

/// The shared two-node seed graph: a majority node linked to a minority node.
fn initialize(n: usize) -> LabeledGraph {
    let mut graph = LabeledGraph::with_capacity(n);
    let a = graph.add_node(Group::Majority);
    let b = graph.add_node(Group::Minority);
    graph.add_edge(a, b).expect("seed edge");
    graph
}

/// Forms up to `links` attachment links for `new_node` and returns the nodes
/// it connected to.
///
/// If the first draw already has no support, the node attaches uniformly
/// instead (counted in `stats`), so growth never stalls. If the support
/// empties after at least one link formed, the remaining links are dropped
/// rather than redirected: redirecting would manufacture cross-group edges
/// that the homophily extremes h = 0 and h = 1 exclude.
fn attach(
    graph: &mut LabeledGraph,
    new_node: NodeId,
    new_group: Group,
    links: usize,
    config: &GeneratorConfig,
    rng: &mut ChaCha8Rng,
    stats: &mut GrowthStats,
) -> Vec<NodeId> {
    let candidates: Vec<NodeId> = (0..new_node).collect();
    let links = links.min(candidates.len());
    if links == 0 {
        return Vec::new();
    }
    let mut weights = match homophily_weights(
        graph,
        new_group,
        &candidates,
        config.homophily,
        config.alpha,
    ) {
        Ok(w) => w.weights,
        Err(GeneratorError::EmptySupport) => {
            stats.uniform_fallback_nodes += 1;
            vec![1.0; candidates.len()]
        }
        Err(_) => unreachable!("homophily_weights only fails with EmptySupport"),
    };
    let mut picked = Vec::with_capacity(links);
    for _ in 0..links {
        match draw_index(&weights, rng) {
            Some(i) => {
                weights[i] = 0.0;
                let target = candidates[i];
                graph
                    .add_edge(new_node, target)
                    .expect("draw excludes existing neighbors");
                picked.push(target);
            }
            None => {
                stats.skipped_attachment_links += links - picked.len();
                break;
            }
        }
    }
    picked
}

/// Grows a graph by homophilic preferential attachment alone (all presets
/// with `diversified_links = 0`).
///
/// Deterministic given `rng_seed`; the result always has exactly `n` nodes.
pub fn grow_homophily_ba(config: &GeneratorConfig) -> Result<Generation, GeneratorError> {
    config.validate()?;
    if config.diversified_links != 0 {
        return Err(GeneratorError::InvalidConfig(
            "grow_homophily_ba requires diversified_links = 0".to_string(),
        ));
    }
    let mut rng = seeds::rng_for(config.rng_seed);
    let mut graph = initialize(config.n);
    let mut stats = GrowthStats::default();
    for _ in 2..config.n {
        let group = draw_group(&mut rng, config.minority_fraction);
        let new_node = graph.add_node(group);
        attach(
            &mut graph,
            new_node,
            group,
            config.links_per_node,
            config,
            &mut rng,
            &mut stats,
        );
    }
    Ok(Generation { graph, stats })
}

/// Grows a graph with the diversified-link mechanism: each arrival first
/// forms `links_per_node - diversified_links` attachment links (the anchor
/// set), then up to `diversified_links` links drawn from the anchors'
/// neighborhoods.
pub fn grow_diversified(config: &GeneratorConfig) -> Result<Generation, GeneratorError> {
    config.validate()?;
    if config.diversified_links == 0 {
        return Err(GeneratorError::InvalidConfig(
            "grow_diversified requires diversified_links >= 1".to_string(),
        ));
    }
    let mut rng = seeds::rng_for(config.rng_seed);
    let mut graph = initialize(config.n);
    let mut stats = GrowthStats::default();
    let attachment_links = config.links_per_node - config.diversified_links;
    for _ in 2..config.n {
        let group = draw_group(&mut rng, config.minority_fraction);
        let new_node = graph.add_node(group);
        let anchors = attach(
            &mut graph,
            new_node,
            group,
            attachment_links,
            config,
            &mut rng,
            &mut stats,
        );
        let mut remaining = config.diversified_links;
        match diversified_weights(&graph, new_node, &anchors, config.diversification) {
            Ok(mut aw) => {
                while remaining > 0 {
                    match draw_index(&aw.weights, &mut rng) {
                        Some(i) => {
                            aw.weights[i] = 0.0;
                            graph
                                .add_edge(new_node, aw.candidates[i])
                                .expect("candidates exclude existing neighbors");
                            remaining -= 1;
                        }
                        None => break,
                    }
                }
                stats.skipped_diversified_links += remaining;
            }
            Err(GeneratorError::EmptySupport) => {
                stats.skipped_diversified_links += remaining;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Generation { graph, stats })
}

/// Grows a graph according to `config.preset`, dispatching on whether the
/// diversified mechanism is active.
pub fn generate(config: &GeneratorConfig) -> Result<Generation, GeneratorError> {
    config.validate()?;
    if config.diversified_links >= 1 {
        grow_diversified(config)
    } else {
        grow_homophily_ba(config)
    }
}

fn draw_group(rng: &mut ChaCha8Rng, minority_fraction: f64) -> Group {
    if rng.gen::<f64>() < minority_fraction {
        Group::Minority
    } else {
        Group::Majority
    }
}
