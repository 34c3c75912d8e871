//! Acceptance suite: one test per criterion, run at the study's published
//! parameters (N = 5000, m = 0.2, l = 2, h = 0.8, alpha = 1, l_d = 1,
//! p_d = 0.6; rates 0.7/0.3, a = 0.1, s = 10). Monte Carlo criteria use a
//! fixed master seed, 20 realizations for structural statistics and 50 runs
//! per process cell, and two-standard-error gaps where an ordering is
//! asserted.
//!
//! Run with `cargo test -p fairnet-core --test acceptance -- --nocapture`
//! to see one PASS line per criterion.

mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use common::{floyd_warshall, mean, random_graph, stderr};
use fairnet_core::contagion::{
    equality_curve, simulate, step, ContagionConfig, ContagionKind, EqualityCurve, SeedingBucket,
    TerminalReason,
};
use fairnet_core::experiments::{
    run_sweep, time_to_coverage, time_to_equality, ProcessCell, RateMode, RunCurves, SweepAxis,
    SweepOutput, SweepSpec,
};
use fairnet_core::generators::{
    diversified_weights, generate, homophily_weights, GeneratorConfig, ModelPreset,
};
use fairnet_core::graph::{graph_from_edges, Group};
use fairnet_core::measures::{wasserstein_1d, MeasureOptions, MeasureReport};
use fairnet_core::seeds::derive_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MASTER_SEED: u64 = 7;
const REALIZATIONS: usize = 20;
const PROCESS_RUNS: usize = 50;
const EPSILON: f64 = 0.05;

fn experiment1_template() -> GeneratorConfig {
    GeneratorConfig {
        n: 5000,
        minority_fraction: 0.2,
        links_per_node: 2,
        homophily: 0.8,
        alpha: 1.0,
        diversified_links: 1,
        diversification: 0.6,
        ..GeneratorConfig::default()
    }
}

// ---------------------------------------------------------------------------
// Shared studies, computed once and reused across criteria.

static EXPERIMENT1: OnceLock<Vec<(ModelPreset, Vec<MeasureReport>)>> = OnceLock::new();

fn experiment1() -> &'static Vec<(ModelPreset, Vec<MeasureReport>)> {
    EXPERIMENT1.get_or_init(|| {
        let template = experiment1_template();
        ModelPreset::ALL
            .into_iter()
            .map(|preset| {
                let reports: Vec<MeasureReport> = (0..REALIZATIONS as u64)
                    .into_par_iter()
                    .map(|r| {
                        let mut config = template.resolved_for(preset);
                        config.rng_seed = derive_seed(MASTER_SEED, &[10, preset as u64, r]);
                        let graph = generate(&config).expect("valid config").graph;
                        MeasureReport::compute(&graph, &MeasureOptions::default())
                            .expect("well-formed graph")
                    })
                    .collect();
                (preset, reports)
            })
            .collect()
    })
}

fn reports_for(preset: ModelPreset) -> &'static [MeasureReport] {
    &experiment1()
        .iter()
        .find(|(p, _)| *p == preset)
        .expect("preset present")
        .1
}

/// Mean and standard error of one report column.
fn stat(preset: ModelPreset, f: impl Fn(&MeasureReport) -> f64) -> (f64, f64) {
    let values: Vec<f64> = reports_for(preset).iter().map(f).collect();
    (mean(&values), stderr(&values))
}

fn assert_gap(label: &str, (hi, hi_se): (f64, f64), (lo, lo_se): (f64, f64)) {
    let gap = hi - lo;
    let bound = 2.0 * (hi_se * hi_se + lo_se * lo_se).sqrt();
    assert!(
        gap > bound,
        "{label}: gap {gap:.4} (= {hi:.4} - {lo:.4}) does not exceed 2 se = {bound:.4}"
    );
}

static PROCESS: OnceLock<SweepOutput> = OnceLock::new();

fn process_study() -> &'static SweepOutput {
    PROCESS.get_or_init(|| {
        let spec = SweepSpec {
            axis: SweepAxis::Presets(ModelPreset::ALL.to_vec()),
            generator: experiment1_template(),
            contagion: ContagionConfig::default(),
            realizations: PROCESS_RUNS,
            kinds: vec![ContagionKind::Simple, ContagionKind::Complex],
            rate_modes: vec![RateMode::Symmetric, RateMode::Asymmetric],
            buckets: vec![SeedingBucket::Low, SeedingBucket::High],
            master_seed: MASTER_SEED,
            keep_per_run: true,
        };
        let output = run_sweep(&spec).expect("valid spec");
        assert!(output.diagnostics.is_empty(), "{:?}", output.diagnostics);
        output
    })
}

fn cell_runs(
    output: &'static SweepOutput,
    kind: ContagionKind,
    rate_mode: RateMode,
    bucket: SeedingBucket,
) -> &'static [Vec<RunCurves>] {
    let target = ProcessCell {
        kind,
        rate_mode,
        bucket,
    };
    output
        .cells
        .iter()
        .find(|c| c.cell == target)
        .expect("cell present")
        .runs
        .as_ref()
        .expect("per-run curves retained")
}

fn preset_row(output: &SweepOutput, preset: ModelPreset) -> usize {
    output
        .row_labels
        .iter()
        .position(|l| l == preset.token())
        .expect("row present")
}

/// Mean gap over the first quarter of the normalized-time bins: the
/// "initial phase" of the curve.
fn first_quartile_mean(curve: &EqualityCurve) -> f64 {
    let q = curve.bins() / 4;
    curve.delta[..q].iter().sum::<f64>() / q as f64
}

fn equality_times(runs: &[RunCurves]) -> Vec<f64> {
    runs.iter()
        .filter_map(|r| time_to_equality(&r.equality, EPSILON))
        .collect()
}

// ---------------------------------------------------------------------------
// Criteria 1-6: structural statistics at the Experiment 1 configuration.

#[test]
fn criterion_01_random_mixing_baseline() {
    for preset in [ModelPreset::RandomNetwork, ModelPreset::Ba] {
        for (name, value) in [
            ("dyadicity_maj", stat(preset, |r| r.dyadicity_maj).0),
            ("dyadicity_min", stat(preset, |r| r.dyadicity_min).0),
            ("heterophilicity", stat(preset, |r| r.heterophilicity).0),
        ] {
            assert!(
                (0.9..=1.1).contains(&value),
                "{} {name} = {value:.4} outside [0.9, 1.1]",
                preset.token()
            );
        }
    }
    println!("criterion 01 PASS: random-network and ba mixing statistics within [0.9, 1.1]");
}

#[test]
fn criterion_02_homophily_dyadicity_structure() {
    let preset = ModelPreset::HomophilyBa;
    let d_maj = stat(preset, |r| r.dyadicity_maj);
    let d_min = stat(preset, |r| r.dyadicity_min);
    let het = stat(preset, |r| r.heterophilicity);
    assert_gap("D_min > D_maj", d_min, d_maj);
    assert_gap("D_maj > 1", d_maj, (1.0, 0.0));
    assert_gap("H < 1", (1.0, 0.0), het);
    println!(
        "criterion 02 PASS: homophily-ba D_min {:.3} > D_maj {:.3} > 1 and H {:.3} < 1",
        d_min.0, d_maj.0, het.0
    );
}

#[test]
fn criterion_03_perfect_homophily_single_cross_edge() {
    let failures: Vec<String> = (0..REALIZATIONS as u64)
        .into_par_iter()
        .filter_map(|r| {
            let config = GeneratorConfig {
                homophily: 1.0,
                rng_seed: derive_seed(MASTER_SEED, &[30, r]),
                ..experiment1_template().resolved_for(ModelPreset::HomophilyBa)
            };
            let cross = generate(&config).unwrap().graph.group_tally().e_cross;
            (cross != 1).then(|| format!("realization {r}: {cross} cross edges"))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
    println!(
        "criterion 03 PASS: h = 1 produced exactly 1 inter-group edge in all {REALIZATIONS} realizations"
    );
}

#[test]
fn criterion_04_equality_measure_ranking() {
    use ModelPreset::*;
    let tiers = [
        vec![RandomNetwork, Ba],
        vec![DiversifiedHomophily, DiversifiedHomophilyBa],
        vec![RandomHomophily, HomophilyBa],
    ];
    // EMD ascends from the most equal tier; PI and g descend.
    for boundary in 0..2 {
        for &better in &tiers[boundary] {
            for &worse in &tiers[boundary + 1] {
                let pair = format!("{} vs {}", better.token(), worse.token());
                assert_gap(
                    &format!("EMD {pair}"),
                    stat(worse, |r| r.emd),
                    stat(better, |r| r.emd),
                );
                assert_gap(
                    &format!("PI {pair}"),
                    stat(better, |r| r.power_inequality),
                    stat(worse, |r| r.power_inequality),
                );
                assert_gap(
                    &format!("g {pair}"),
                    stat(better, |r| r.glass_ceiling),
                    stat(worse, |r| r.glass_ceiling),
                );
            }
        }
    }
    println!(
        "criterion 04 PASS: EMD/PI/g tier ranking (random tier, diversified tier, homophilic tier) holds with > 2 se gaps"
    );
}

#[test]
fn criterion_05_diversity_raises_heterophilicity() {
    let dhba = stat(ModelPreset::DiversifiedHomophilyBa, |r| r.heterophilicity);
    let hba = stat(ModelPreset::HomophilyBa, |r| r.heterophilicity);
    assert_gap("H(diversified-homophily-ba) > H(homophily-ba)", dhba, hba);
    println!(
        "criterion 05 PASS: heterophilicity {:.3} (diversified-homophily-ba) > {:.3} (homophily-ba)",
        dhba.0, hba.0
    );
}

#[test]
fn criterion_06_distance_ordering() {
    let aspl = |p: ModelPreset| stat(p, |r| r.avg_shortest_path);
    let dh = aspl(ModelPreset::DiversifiedHomophily);
    let dhba = aspl(ModelPreset::DiversifiedHomophilyBa);
    let rn = aspl(ModelPreset::RandomNetwork);
    let hba = aspl(ModelPreset::HomophilyBa);
    assert_gap("ASPL dh > dhba", dh, dhba);
    // Middle pair is only claimed as "slightly higher": no 2-se requirement.
    assert!(
        dhba.0 >= rn.0,
        "ASPL dhba {:.4} < random-network {:.4}",
        dhba.0,
        rn.0
    );
    assert_gap("ASPL rn > hba", rn, hba);
    println!(
        "criterion 06 PASS: ASPL ordering {:.3} > {:.3} >= {:.3} > {:.3}",
        dh.0, dhba.0, rn.0, hba.0
    );
}

// ---------------------------------------------------------------------------
// Criteria 7-10: spreading behavior.

#[test]
fn criterion_07_equality_curve_sign_structure() {
    let output = process_study();
    for kind in [ContagionKind::Simple, ContagionKind::Complex] {
        for rate_mode in [RateMode::Symmetric, RateMode::Asymmetric] {
            for (bucket, positive) in [(SeedingBucket::Low, true), (SeedingBucket::High, false)] {
                let runs = cell_runs(output, kind, rate_mode, bucket);
                for preset in ModelPreset::ALL {
                    let row = preset_row(output, preset);
                    let initial: Vec<f64> = runs[row]
                        .iter()
                        .map(|r| first_quartile_mean(&r.equality))
                        .collect();
                    let m = mean(&initial);
                    let context = format!(
                        "{} {}-{}-{}",
                        preset.token(),
                        kind.token(),
                        rate_mode.token(),
                        bucket.token()
                    );
                    if positive {
                        assert!(m > 0.0, "{context}: initial mean gap {m:.4} not positive");
                    } else {
                        assert!(m < 0.0, "{context}: initial mean gap {m:.4} not negative");
                    }
                    for run in &runs[row] {
                        if run.terminal == TerminalReason::AllInfected {
                            let last = run.equality.delta.last().unwrap().abs();
                            assert!(last < 0.02, "{context}: final bin |gap| = {last}");
                        }
                    }
                }
            }
        }
    }
    println!(
        "criterion 07 PASS: initial gap positive under low seeding and negative under high, all presets and process cells; fully infected runs end at gap 0"
    );
}

#[test]
fn criterion_08_time_to_equality_model_ranking() {
    let runs = cell_runs(
        process_study(),
        ContagionKind::Complex,
        RateMode::Asymmetric,
        SeedingBucket::Low,
    );
    let output = process_study();
    let times = |preset: ModelPreset| -> (f64, f64) {
        let t = equality_times(&runs[preset_row(output, preset)]);
        assert!(t.len() >= 45, "{} settled in only {} runs", preset.token(), t.len());
        (mean(&t), stderr(&t))
    };
    let dhba = times(ModelPreset::DiversifiedHomophilyBa);
    let hba = times(ModelPreset::HomophilyBa);
    assert_gap(
        "time to equality homophily-ba > diversified-homophily-ba",
        hba,
        dhba,
    );
    println!(
        "criterion 08 PASS: complex/low time-to-equality {:.3} (diversified-homophily-ba) < {:.3} (homophily-ba)",
        dhba.0, hba.0
    );
}

static H_SWEEP: OnceLock<SweepOutput> = OnceLock::new();

#[test]
fn criterion_09_homophily_sweep_monotonicity() {
    let output = H_SWEEP.get_or_init(|| {
        let spec = SweepSpec {
            axis: SweepAxis::Homophily(vec![0.5, 0.7, 0.9]),
            generator: GeneratorConfig {
                diversified_links: 0,
                ..experiment1_template()
            },
            contagion: ContagionConfig::default(),
            realizations: PROCESS_RUNS,
            kinds: vec![ContagionKind::Simple],
            rate_modes: vec![RateMode::Symmetric],
            buckets: vec![SeedingBucket::Low],
            master_seed: MASTER_SEED,
            keep_per_run: true,
        };
        run_sweep(&spec).expect("valid spec")
    });
    let runs = &output.cells[0].runs.as_ref().unwrap();
    let mut means = Vec::new();
    for (row, label) in output.row_labels.iter().enumerate() {
        let times = equality_times(&runs[row]);
        assert!(times.len() >= 45, "h = {label} settled in only {} runs", times.len());
        means.push((label.clone(), mean(&times)));
    }
    for pair in means.windows(2) {
        assert!(
            pair[0].1 < pair[1].1,
            "time to equality not increasing: h = {} gives {:.4}, h = {} gives {:.4}",
            pair[0].0,
            pair[0].1,
            pair[1].0,
            pair[1].1
        );
    }
    println!(
        "criterion 09 PASS: simple/symmetric/low time-to-equality increases in h: {:.3} < {:.3} < {:.3}",
        means[0].1, means[1].1, means[2].1
    );
}

#[test]
fn criterion_10_efficiency_contrast_by_contagion() {
    let output = process_study();
    let coverage = |kind: ContagionKind, preset: ModelPreset| -> (f64, f64) {
        let runs = cell_runs(output, kind, RateMode::Symmetric, SeedingBucket::Low);
        let effs: Vec<Vec<f64>> = runs[preset_row(output, preset)]
            .iter()
            .map(|r| r.efficiency.clone())
            .collect();
        let summary = time_to_coverage(&effs, 0.99);
        let steps: Vec<f64> = summary
            .per_run
            .iter()
            .flatten()
            .map(|&t| t as f64)
            .collect();
        assert!(
            steps.len() * 2 > PROCESS_RUNS,
            "{} reached 99% coverage in only {} runs",
            preset.token(),
            steps.len()
        );
        (mean(&steps), stderr(&steps))
    };

    let hba = coverage(ContagionKind::Simple, ModelPreset::HomophilyBa);
    let dh = coverage(ContagionKind::Simple, ModelPreset::DiversifiedHomophily);
    assert_gap("simple coverage: diversified-homophily slower than homophily-ba", dh, hba);

    let rn = coverage(ContagionKind::Complex, ModelPreset::RandomNetwork);
    let ba = coverage(ContagionKind::Complex, ModelPreset::Ba);
    assert_gap("complex coverage: ba slower than random-network", ba, rn);

    println!(
        "criterion 10 PASS: simple coverage {:.2} (homophily-ba) < {:.2} (diversified-homophily); complex coverage {:.2} (random-network) < {:.2} (ba)",
        hba.0, dh.0, rn.0, ba.0
    );
}

// ---------------------------------------------------------------------------
// Criterion 11: the oracle and property backstop.

fn assert_sampler_frequencies(
    weights: &fairnet_core::generators::AttachmentWeights,
    seed: u64,
    draws: usize,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = weights.probabilities();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for _ in 0..draws {
        let picked = weights.sample_one(&mut rng).unwrap();
        *counts.entry(picked).or_default() += 1;
    }
    for (idx, &p) in probs.iter().enumerate() {
        let freq = *counts.get(&weights.candidates[idx]).unwrap_or(&0) as f64 / draws as f64;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        assert!(
            (freq - p).abs() <= 3.0 * se.max(1e-12),
            "weight {idx}: freq {freq} vs p {p}"
        );
    }
}

#[test]
fn criterion_11_oracle_property_suites() {
    use Group::{Majority as Maj, Minority as Min};
    let draws = 100_000;

    // Attachment-weight sampler frequencies on a fixed 5-node graph.
    let fixture = graph_from_edges(
        &[Maj, Min, Maj, Min, Maj],
        &[(0, 1), (0, 2), (0, 3), (2, 4)],
    );
    let eq1 = homophily_weights(&fixture, Min, &[0, 1, 2, 3, 4], 0.7, 1.3).unwrap();
    assert_sampler_frequencies(&eq1, 110, draws);
    let anchored = graph_from_edges(
        &[Min, Maj, Maj, Min, Maj, Maj],
        &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)],
    );
    let eq2 = diversified_weights(&anchored, 0, &[1], 0.6).unwrap();
    assert_sampler_frequencies(&eq2, 111, draws);

    // BFS against Floyd-Warshall, exact, on 100 random graphs.
    let mut rng = ChaCha8Rng::seed_from_u64(112);
    for _ in 0..100 {
        let g = random_graph(&mut rng, 12, 0.3);
        let oracle = floyd_warshall(&g);
        for s in g.nodes() {
            let bfs = g.bfs_distances(s).unwrap();
            for t in g.nodes() {
                assert_eq!(bfs[t].map(u64::from), oracle[s][t]);
            }
        }
    }

    // EMD against brute-force transport on expanded atoms, to 1e-9.
    for _ in 0..100 {
        let sample = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            let len = rng.gen_range(1..=8);
            (0..len).map(|_| rng.gen_range(0..25) as f64).collect()
        };
        let xs = sample(&mut rng);
        let ys = sample(&mut rng);
        let l = xs.len() * ys.len();
        let expand = |v: &[f64]| -> Vec<f64> {
            let mut atoms: Vec<f64> = v
                .iter()
                .flat_map(|&x| std::iter::repeat_n(x, l / v.len()))
                .collect();
            atoms.sort_unstable_by(f64::total_cmp);
            atoms
        };
        let (a, b) = (expand(&xs), expand(&ys));
        let oracle = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>()
            / l as f64;
        let got = wasserstein_1d(xs, ys);
        assert!((got - oracle).abs() < 1e-9, "emd {got} vs oracle {oracle}");
    }

    // One-step SI infection probability against 1 - prod(1 - r).
    let si_graph = graph_from_edges(
        &[Maj, Min, Maj, Min, Maj],
        &[(0, 2), (0, 3), (1, 2), (1, 3), (1, 4), (3, 4)],
    );
    let config = ContagionConfig {
        r_within: 0.7,
        r_between: 0.3,
        ..ContagionConfig::default()
    };
    let infected = vec![0, 1];
    let mut counts = [0usize; 5];
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    for _ in 0..draws {
        for v in step(&si_graph, &infected, &config, &mut rng) {
            counts[v] += 1;
        }
    }
    for (v, expected) in [(2usize, 0.79), (3, 0.79), (4, 0.3)] {
        let freq = counts[v] as f64 / draws as f64;
        let se = (expected * (1.0 - expected) / draws as f64).sqrt();
        assert!(
            (freq - expected).abs() <= 3.0 * se,
            "node {v}: freq {freq} vs {expected}"
        );
    }

    // Gap boundedness and terminal equality on every retained trace of the
    // process study.
    let output = process_study();
    for cell in &output.cells {
        for row_runs in cell.runs.as_ref().unwrap() {
            for run in row_runs {
                for &d in &run.equality.delta {
                    assert!((-1.0..=1.0).contains(&d));
                }
                if run.terminal == TerminalReason::AllInfected {
                    assert_eq!(*run.equality.delta.last().unwrap(), 0.0);
                }
            }
        }
    }

    // Byte-identical rerun of a sweep under a fixed master seed.
    let spec = SweepSpec {
        axis: SweepAxis::Presets(vec![ModelPreset::HomophilyBa]),
        generator: GeneratorConfig {
            n: 400,
            ..experiment1_template()
        },
        contagion: ContagionConfig {
            bins: 50,
            ..ContagionConfig::default()
        },
        realizations: 5,
        kinds: vec![ContagionKind::Simple, ContagionKind::Complex],
        rate_modes: vec![RateMode::Asymmetric],
        buckets: vec![SeedingBucket::Low],
        master_seed: MASTER_SEED,
        keep_per_run: false,
    };
    let a = run_sweep(&spec).unwrap();
    let b = run_sweep(&spec).unwrap();
    for (ca, cb) in a.cells.iter().zip(b.cells.iter()) {
        assert_eq!(ca.equality, cb.equality);
        assert_eq!(ca.efficiency, cb.efficiency);
    }

    println!(
        "criterion 11 PASS: sampler frequencies, BFS/Floyd-Warshall, EMD transport, SI closed form, gap bounds, and byte-identical reruns all hold"
    );
}

// ---------------------------------------------------------------------------
// Safety net: the shared studies also back a couple of cross-checks that the
// simulation layer stays consistent with the direct API.

#[test]
fn shared_study_is_reproducible_from_documented_seeds() {
    let output = process_study();
    let row = preset_row(output, ModelPreset::RandomNetwork);
    let cell = &output.cells[0];
    let runs = cell.runs.as_ref().unwrap();

    // Rebuild run 0 by hand: same derived seeds, same curves.
    let mut config = experiment1_template().resolved_for(ModelPreset::RandomNetwork);
    config.rng_seed = derive_seed(MASTER_SEED, &[1, row as u64, 0]);
    let graph = generate(&config).unwrap().graph;
    let sim = ContagionConfig {
        kind: cell.cell.kind,
        bucket: cell.cell.bucket,
        r_between: match cell.cell.rate_mode {
            RateMode::Symmetric => 0.7,
            RateMode::Asymmetric => 0.3,
        },
        rng_seed: derive_seed(MASTER_SEED, &[2, row as u64, 0, 0]),
        ..ContagionConfig::default()
    };
    let trace = simulate(&graph, &sim).unwrap();
    let curve = equality_curve(&trace, &graph, 100).unwrap();
    assert_eq!(runs[row][0].equality, curve);
}
