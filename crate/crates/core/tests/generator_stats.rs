//! Monte Carlo checks of the growth machinery: sampler frequencies against
//! enumerated probabilities, reproducibility, and the qualitative structure
//! the models must produce.

mod common;

use common::{assert_graph_invariants, mean};
use fairnet_core::generators::{
    diversified_weights, generate, grow_diversified, grow_homophily_ba, homophily_weights,
    AttachmentWeights, GeneratorConfig, ModelPreset,
};
use fairnet_core::graph::{graph_from_edges, Group, LabeledGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use Group::{Majority as Maj, Minority as Min};

const DRAWS: usize = 100_000;

/// |observed - expected| must stay within 3 binomial standard errors.
fn assert_frequencies_match(weights: &AttachmentWeights, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = weights.probabilities();
    let mut counts = vec![0usize; weights.candidates.len()];
    for _ in 0..DRAWS {
        let picked = weights.sample_one(&mut rng).unwrap();
        let idx = weights.candidates.iter().position(|&c| c == picked).unwrap();
        counts[idx] += 1;
    }
    for (idx, &p) in probs.iter().enumerate() {
        let freq = counts[idx] as f64 / DRAWS as f64;
        let se = (p * (1.0 - p) / DRAWS as f64).sqrt();
        assert!(
            (freq - p).abs() <= 3.0 * se.max(1e-12),
            "candidate {idx}: freq {freq} vs p {p} (se {se})"
        );
    }
}

/// Star-plus-edge fixture with mixed groups and degrees 1..=3.
fn five_node_fixture() -> LabeledGraph {
    graph_from_edges(
        &[Maj, Min, Maj, Min, Maj],
        &[(0, 1), (0, 2), (0, 3), (2, 4)],
    )
}

#[test]
fn attachment_sampler_matches_enumerated_probabilities() {
    let g = five_node_fixture();
    let weights = homophily_weights(&g, Min, &[0, 1, 2, 3, 4], 0.7, 1.3).unwrap();
    assert_frequencies_match(&weights, 2001);
}

#[test]
fn diversified_sampler_matches_enumerated_probabilities() {
    let g = graph_from_edges(
        &[Min, Maj, Maj, Min, Maj, Maj],
        &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)],
    );
    let weights = diversified_weights(&g, 0, &[1], 0.6).unwrap();
    assert!(weights.candidates.len() >= 2);
    assert_frequencies_match(&weights, 2002);
}

#[test]
fn random_mixing_equals_a_direct_uniform_sampler() {
    // h = 0.5, alpha = 0 must reduce to uniform attachment: identical
    // weights, and empirical frequencies indistinguishable from a direct
    // uniform draw at the 3-sigma level.
    let g = five_node_fixture();
    let weights = homophily_weights(&g, Maj, &[0, 1, 2, 3, 4], 0.5, 0.0).unwrap();
    for w in &weights.weights {
        assert_eq!(*w, 0.5);
    }
    assert_frequencies_match(&weights, 2003);

    let mut rng = ChaCha8Rng::seed_from_u64(2004);
    let mut uniform_counts = [0usize; 5];
    for _ in 0..DRAWS {
        uniform_counts[rng.gen_range(0..5)] += 1;
    }
    let mut weighted_counts = [0usize; 5];
    let mut rng = ChaCha8Rng::seed_from_u64(2005);
    for _ in 0..DRAWS {
        weighted_counts[weights.sample_one(&mut rng).unwrap()] += 1;
    }
    for i in 0..5 {
        let fu = uniform_counts[i] as f64 / DRAWS as f64;
        let fw = weighted_counts[i] as f64 / DRAWS as f64;
        let se = (0.2 * 0.8 / DRAWS as f64).sqrt() * std::f64::consts::SQRT_2;
        assert!(
            (fu - fw).abs() <= 3.0 * se,
            "candidate {i}: uniform {fu} vs weighted {fw}"
        );
    }
}

#[test]
fn identical_seed_reproduces_identical_graphs() {
    let config = GeneratorConfig {
        preset: ModelPreset::DiversifiedHomophilyBa,
        n: 1200,
        diversified_links: 1,
        rng_seed: 77,
        ..GeneratorConfig::default()
    };
    let a = generate(&config).unwrap();
    let b = generate(&config).unwrap();
    assert_eq!(a.graph, b.graph);
    assert_eq!(a.stats, b.stats);
    let other = generate(&GeneratorConfig {
        rng_seed: 78,
        ..config
    })
    .unwrap();
    assert_ne!(a.graph, other.graph);
}

#[test]
fn minority_fraction_concentrates_near_target() {
    let config = GeneratorConfig {
        n: 5000,
        rng_seed: 31,
        ..GeneratorConfig::default()
    };
    let gen = grow_homophily_ba(&config).unwrap();
    let tally = gen.graph.group_tally();
    let m = config.minority_fraction;
    let bound = 3.0 * (m * (1.0 - m) / config.n as f64).sqrt();
    let observed = tally.n_min as f64 / config.n as f64;
    assert!(
        (observed - m).abs() <= bound,
        "minority fraction {observed} vs {m} (bound {bound})"
    );
}

#[test]
fn homophily_ba_edge_count_matches_arrival_formula() {
    // 1 seed edge + min(l, j) edges for each arrival j = 2..N-1:
    // 1 + 2 + 2 * 4997 = 9997 for N = 5000, l = 2.
    let config = GeneratorConfig {
        n: 5000,
        rng_seed: 4,
        ..GeneratorConfig::default()
    };
    let gen = grow_homophily_ba(&config).unwrap();
    assert_eq!(gen.graph.edge_count(), 9997);
    assert_eq!(gen.graph.node_count(), 5000);
}

#[test]
fn perfect_homophily_has_exactly_one_cross_edge_at_scale() {
    let config = GeneratorConfig {
        homophily: 1.0,
        n: 5000,
        rng_seed: 9,
        ..GeneratorConfig::default()
    };
    let gen = grow_homophily_ba(&config).unwrap();
    assert_eq!(gen.graph.group_tally().e_cross, 1);
}

#[test]
fn ba_grows_a_heavier_tail_than_random_network() {
    let template = GeneratorConfig {
        n: 5000,
        ..GeneratorConfig::default()
    };
    let max_degree = |preset: ModelPreset, seed: u64| -> f64 {
        let mut config = template.resolved_for(preset);
        if preset == ModelPreset::Ba {
            config.alpha = 1.0;
        }
        config.rng_seed = seed;
        let g = generate(&config).unwrap().graph;
        g.nodes().map(|v| g.neighbors(v).len()).max().unwrap() as f64
    };
    let ba: Vec<f64> = (0..20).map(|r| max_degree(ModelPreset::Ba, 100 + r)).collect();
    let rn: Vec<f64> = (0..20)
        .map(|r| max_degree(ModelPreset::RandomNetwork, 200 + r))
        .collect();
    assert!(
        mean(&ba) > mean(&rn),
        "BA max degree {} should exceed random network {}",
        mean(&ba),
        mean(&rn)
    );
}

#[test]
fn diversification_probability_raises_cross_edges() {
    let cross_mean = |p_d: f64, base_seed: u64| -> f64 {
        let samples: Vec<f64> = (0..20)
            .map(|r| {
                let config = GeneratorConfig {
                    preset: ModelPreset::DiversifiedHomophilyBa,
                    n: 5000,
                    diversified_links: 1,
                    diversification: p_d,
                    rng_seed: base_seed + r,
                    ..GeneratorConfig::default()
                };
                grow_diversified(&config).unwrap().graph.group_tally().e_cross as f64
            })
            .collect();
        mean(&samples)
    };
    let high = cross_mean(0.6, 300);
    let low = cross_mean(0.01, 400);
    assert!(
        high > low,
        "mean cross edges at p_d=0.6 ({high}) must exceed p_d=0.01 ({low})"
    );
}

#[test]
fn every_preset_generates_valid_graphs() {
    let template = GeneratorConfig {
        n: 2000,
        diversified_links: 1,
        ..GeneratorConfig::default()
    };
    for (i, preset) in ModelPreset::ALL.into_iter().enumerate() {
        let mut config = template.resolved_for(preset);
        config.rng_seed = 500 + i as u64;
        let gen = generate(&config).unwrap();
        assert_eq!(gen.graph.node_count(), 2000);
        assert_graph_invariants(&gen.graph);
        let tally = gen.graph.group_tally();
        assert!(tally.n_min > 0 && tally.n_maj > 0);
        assert!(gen.graph.is_connected(), "{} disconnected", preset.token());
    }
}

#[test]
fn diversified_growth_keeps_every_arrival_attached() {
    let config = GeneratorConfig {
        preset: ModelPreset::DiversifiedHomophilyBa,
        n: 5000,
        diversified_links: 1,
        diversification: 0.6,
        rng_seed: 13,
        ..GeneratorConfig::default()
    };
    let gen = grow_diversified(&config).unwrap();
    // l - l_d = 1, so every arrival forms at least its one attachment link.
    for v in gen.graph.nodes() {
        assert!(
            !gen.graph.neighbors(v).is_empty(),
            "node {v} ended up isolated"
        );
    }
}
