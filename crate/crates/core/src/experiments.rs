//! Declarative parameter sweeps.
//!
//! A sweep varies one axis (model preset, a growth parameter, or a set of
//! ingested real networks), generates `R` graph realizations per axis value,
//! simulates every process-grid cell (contagion kind x rate mode x seeding
//! bucket) once per graph, and aggregates the per-run curves into heatmap
//! matrices: mean and standard error per cell.
//!
//! Randomness layout: graph realization `r` of row `i` uses
//! `derive_seed(master, [STREAM_GRAPH, i, r])`; its simulation in process
//! cell `c` uses `derive_seed(master, [STREAM_SIM, i, r, c])`. Any single
//! run can therefore be re-derived in isolation.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contagion::{
    self, ContagionConfig, ContagionKind, EqualityCurve, SeedingBucket, TerminalReason,
};
use crate::generators::{self, GeneratorConfig, ModelPreset};
use crate::graph::LabeledGraph;
use crate::seeds::derive_seed;

/// Stream tag for graph-generation seeds.
pub const STREAM_GRAPH: u64 = 1;
/// Stream tag for simulation seeds.
pub const STREAM_SIM: u64 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
}

/// Whether a process cell runs with equal rates or a reduced cross-group
/// rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateMode {
    /// `r_between = r_within`.
    Symmetric,
    /// `r_between` as configured (must not exceed `r_within`).
    Asymmetric,
}

impl RateMode {
    pub fn token(self) -> &'static str {
        match self {
            RateMode::Symmetric => "symmetric",
            RateMode::Asymmetric => "asymmetric",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "symmetric" => Some(RateMode::Symmetric),
            "asymmetric" => Some(RateMode::Asymmetric),
            _ => None,
        }
    }
}

/// One cell of the process grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ProcessCell {
    pub kind: ContagionKind,
    pub rate_mode: RateMode,
    pub bucket: SeedingBucket,
}

impl ProcessCell {
    pub fn label(&self) -> String {
        format!(
            "{}-{}-{}",
            self.kind.token(),
            self.rate_mode.token(),
            self.bucket.token()
        )
    }
}

/// The swept parameter and its values.
#[derive(Debug, Clone)]
pub enum SweepAxis {
    Presets(Vec<ModelPreset>),
    Homophily(Vec<f64>),
    Alpha(Vec<f64>),
    MinorityFraction(Vec<f64>),
    Diversification(Vec<f64>),
    /// Pre-ingested graphs, labeled. Each row reuses the same graph for all
    /// realizations; only the process randomness varies.
    RealNetworks(Vec<(String, Arc<LabeledGraph>)>),
}

impl SweepAxis {
    pub fn len(&self) -> usize {
        match self {
            SweepAxis::Presets(v) => v.len(),
            SweepAxis::Homophily(v)
            | SweepAxis::Alpha(v)
            | SweepAxis::MinorityFraction(v)
            | SweepAxis::Diversification(v) => v.len(),
            SweepAxis::RealNetworks(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A full sweep description: the axis, the config templates, the process
/// grid, and the realization count.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    /// Template growth config; the axis substitutes into it per row.
    pub generator: GeneratorConfig,
    /// Template process config; `kind`, rates, and `bucket` are overridden
    /// per cell, `rng_seed` per run.
    pub contagion: ContagionConfig,
    /// Realizations `R` per axis value.
    pub realizations: usize,
    pub kinds: Vec<ContagionKind>,
    pub rate_modes: Vec<RateMode>,
    pub buckets: Vec<SeedingBucket>,
    pub master_seed: u64,
    /// Retain per-run curves in the output (needed for run-level summary
    /// statistics; costs memory on large sweeps).
    pub keep_per_run: bool,
}

impl SweepSpec {
    /// The standard process grid from the study design: both contagion
    /// kinds, both rate modes, low and high seeding.
    pub fn default_grid() -> (Vec<ContagionKind>, Vec<RateMode>, Vec<SeedingBucket>) {
        (
            vec![ContagionKind::Simple, ContagionKind::Complex],
            vec![RateMode::Symmetric, RateMode::Asymmetric],
            vec![SeedingBucket::Low, SeedingBucket::High],
        )
    }

    pub fn cells(&self) -> Vec<ProcessCell> {
        let mut cells = Vec::new();
        for &kind in &self.kinds {
            for &rate_mode in &self.rate_modes {
                for &bucket in &self.buckets {
                    cells.push(ProcessCell {
                        kind,
                        rate_mode,
                        bucket,
                    });
                }
            }
        }
        cells
    }

    fn validate(&self) -> Result<(), SweepError> {
        if self.axis.is_empty() {
            return Err(SweepError::InvalidSpec("axis has no values".to_string()));
        }
        if self.realizations == 0 {
            return Err(SweepError::InvalidSpec(
                "realizations must be at least 1".to_string(),
            ));
        }
        if self.kinds.is_empty() || self.rate_modes.is_empty() || self.buckets.is_empty() {
            return Err(SweepError::InvalidSpec(
                "process grid must include at least one kind, rate mode, and bucket".to_string(),
            ));
        }
        self.contagion
            .validate()
            .map_err(|e| SweepError::InvalidSpec(e.to_string()))?;
        Ok(())
    }
}

/// What a heatmap's cells contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeatmapKind {
    /// Mean group gap per normalized-time bin; values in `[-1, 1]`.
    Equality,
    /// Mean total infected fraction per raw step; values in `[0, 1]`.
    Efficiency,
}

/// Mean values (rows = axis values, cols = time bins or raw steps) plus
/// per-cell standard error of the mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatmapMatrix {
    pub kind: HeatmapKind,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
}

/// Curves of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunCurves {
    pub equality: EqualityCurve,
    pub efficiency: Vec<f64>,
    pub terminal: TerminalReason,
    pub termination_step: usize,
}

/// Aggregated output of one process cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub cell: ProcessCell,
    pub equality: HeatmapMatrix,
    pub efficiency: HeatmapMatrix,
    /// Per-run curves indexed `[row][realization]`; present when
    /// `keep_per_run` was set.
    pub runs: Option<Vec<Vec<RunCurves>>>,
}

/// A row that could not be evaluated, with the reason; surviving rows are
/// unaffected.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDiagnostic {
    pub label: String,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub cells: Vec<CellResult>,
    /// Labels of the rows that completed, in axis order.
    pub row_labels: Vec<String>,
    pub diagnostics: Vec<RowDiagnostic>,
}

enum RowSource {
    Generated(GeneratorConfig),
    Real(Arc<LabeledGraph>),
}

struct RowPlan {
    label: String,
    source: RowSource,
}

fn format_value(v: f64) -> String {
    format!("{v}")
}

fn expand_rows(spec: &SweepSpec) -> Vec<RowPlan> {
    let template = &spec.generator;
    let with = |f: &dyn Fn(&mut GeneratorConfig)| {
        let mut c = template.clone();
        f(&mut c);
        c
    };
    match &spec.axis {
        SweepAxis::Presets(presets) => presets
            .iter()
            .map(|&p| RowPlan {
                label: p.token().to_string(),
                source: RowSource::Generated(template.resolved_for(p)),
            })
            .collect(),
        SweepAxis::Homophily(values) => values
            .iter()
            .map(|&v| RowPlan {
                label: format_value(v),
                source: RowSource::Generated(with(&|c| c.homophily = v)),
            })
            .collect(),
        SweepAxis::Alpha(values) => values
            .iter()
            .map(|&v| RowPlan {
                label: format_value(v),
                source: RowSource::Generated(with(&|c| c.alpha = v)),
            })
            .collect(),
        SweepAxis::MinorityFraction(values) => values
            .iter()
            .map(|&v| RowPlan {
                label: format_value(v),
                source: RowSource::Generated(with(&|c| c.minority_fraction = v)),
            })
            .collect(),
        SweepAxis::Diversification(values) => values
            .iter()
            .map(|&v| RowPlan {
                label: format_value(v),
                source: RowSource::Generated(with(&|c| c.diversification = v)),
            })
            .collect(),
        SweepAxis::RealNetworks(rows) => rows
            .iter()
            .map(|(label, graph)| RowPlan {
                label: label.clone(),
                source: RowSource::Real(graph.clone()),
            })
            .collect(),
    }
}

fn cell_config(
    spec: &SweepSpec,
    cell: &ProcessCell,
    seed_count: usize,
    rng_seed: u64,
) -> ContagionConfig {
    let mut config = spec.contagion.clone();
    config.kind = cell.kind;
    config.bucket = cell.bucket;
    config.seed_count = seed_count;
    config.r_between = match cell.rate_mode {
        RateMode::Symmetric => config.r_within,
        RateMode::Asymmetric => config.r_between,
    };
    config.rng_seed = rng_seed;
    config
}

/// Seed count rule for ingested networks: 0.2% of the node count, but at
/// least 5 so the seeding buckets stay enforceable on small graphs.
pub fn real_network_seed_count(node_count: usize) -> usize {
    ((0.002 * node_count as f64).round() as usize).max(5)
}

struct RowData {
    label: String,
    /// `per_run[r][cell_index]`
    per_run: Vec<Vec<RunCurves>>,
}

/// Executes the sweep. Row-level failures (invalid substituted config,
/// unsatisfiable seeding, degenerate traces) become diagnostics; the
/// remaining rows proceed. Deterministic given `master_seed`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput, SweepError> {
    spec.validate()?;
    let cells = spec.cells();
    let plans = expand_rows(spec);
    let realizations = spec.realizations;

    let row_results: Vec<Result<RowData, RowDiagnostic>> = plans
        .par_iter()
        .enumerate()
        .map(|(row_index, plan)| {
            let diag = |message: String| RowDiagnostic {
                label: plan.label.clone(),
                message,
            };
            let graphs: Vec<Arc<LabeledGraph>> = match &plan.source {
                RowSource::Generated(config) => {
                    config.validate().map_err(|e| diag(e.to_string()))?;
                    (0..realizations)
                        .into_par_iter()
                        .map(|r| {
                            let mut c = config.clone();
                            c.rng_seed =
                                derive_seed(spec.master_seed, &[STREAM_GRAPH, row_index as u64, r as u64]);
                            generators::generate(&c).map(|g| Arc::new(g.graph))
                        })
                        .collect::<Result<_, _>>()
                        .map_err(|e| diag(e.to_string()))?
                }
                RowSource::Real(graph) => vec![graph.clone(); realizations],
            };
            let seed_count = match &plan.source {
                RowSource::Generated(_) => spec.contagion.seed_count,
                RowSource::Real(graph) => real_network_seed_count(graph.node_count()),
            };
            let per_run: Vec<Vec<RunCurves>> = (0..realizations)
                .into_par_iter()
                .map(|r| -> Result<Vec<RunCurves>, RowDiagnostic> {
                    cells
                        .iter()
                        .enumerate()
                        .map(|(cell_index, cell)| {
                            let sim_seed = derive_seed(
                                spec.master_seed,
                                &[STREAM_SIM, row_index as u64, r as u64, cell_index as u64],
                            );
                            let config = cell_config(spec, cell, seed_count, sim_seed);
                            let graph = &graphs[r];
                            let trace = contagion::simulate(graph, &config)
                                .map_err(|e| diag(format!("{} ({})", e, cell.label())))?;
                            let equality = contagion::equality_curve(&trace, graph, config.bins)
                                .map_err(|e| diag(format!("{} ({})", e, cell.label())))?;
                            let efficiency = contagion::efficiency_curve(&trace, graph);
                            Ok(RunCurves {
                                equality,
                                efficiency,
                                terminal: trace.terminal,
                                termination_step: trace.termination_step(),
                            })
                        })
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            Ok(RowData {
                label: plan.label.clone(),
                per_run,
            })
        })
        .collect();

    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    for result in row_results {
        match result {
            Ok(row) => rows.push(row),
            Err(diag) => diagnostics.push(diag),
        }
    }
    let row_labels: Vec<String> = rows.iter().map(|r| r.label.clone()).collect();

    let bins = spec.contagion.bins;
    let cell_results = cells
        .iter()
        .enumerate()
        .map(|(cell_index, cell)| {
            let equality = aggregate_equality(&rows, cell_index, bins, &row_labels);
            let efficiency = aggregate_efficiency(&rows, cell_index, &row_labels);
            let runs = spec.keep_per_run.then(|| {
                rows.iter()
                    .map(|row| {
                        row.per_run
                            .iter()
                            .map(|cells_of_run| cells_of_run[cell_index].clone())
                            .collect()
                    })
                    .collect()
            });
            CellResult {
                cell: *cell,
                equality,
                efficiency,
                runs,
            }
        })
        .collect();

    Ok(SweepOutput {
        cells: cell_results,
        row_labels,
        diagnostics,
    })
}

fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn aggregate_equality(
    rows: &[RowData],
    cell_index: usize,
    bins: usize,
    row_labels: &[String],
) -> HeatmapMatrix {
    let cols = (1..=bins)
        .map(|b| format_value(b as f64 / bins as f64))
        .collect();
    let mut values = Vec::with_capacity(rows.len());
    let mut stderr = Vec::with_capacity(rows.len());
    for row in rows {
        let mut mean_row = Vec::with_capacity(bins);
        let mut se_row = Vec::with_capacity(bins);
        for b in 0..bins {
            let samples: Vec<f64> = row
                .per_run
                .iter()
                .map(|run| run[cell_index].equality.delta[b])
                .collect();
            let (mean, se) = mean_and_stderr(&samples);
            mean_row.push(mean);
            se_row.push(se);
        }
        values.push(mean_row);
        stderr.push(se_row);
    }
    HeatmapMatrix {
        kind: HeatmapKind::Equality,
        rows: row_labels.to_vec(),
        cols,
        values,
        stderr,
    }
}

fn aggregate_efficiency(rows: &[RowData], cell_index: usize, row_labels: &[String]) -> HeatmapMatrix {
    // Common x-extent: the longest run in this cell; finished runs are
    // padded at their terminal value.
    let max_t = rows
        .iter()
        .flat_map(|row| row.per_run.iter())
        .map(|run| run[cell_index].efficiency.len() - 1)
        .max()
        .unwrap_or(0);
    let cols = (0..=max_t).map(|t| t.to_string()).collect();
    let mut values = Vec::with_capacity(rows.len());
    let mut stderr = Vec::with_capacity(rows.len());
    for row in rows {
        let mut mean_row = Vec::with_capacity(max_t + 1);
        let mut se_row = Vec::with_capacity(max_t + 1);
        for t in 0..=max_t {
            let samples: Vec<f64> = row
                .per_run
                .iter()
                .map(|run| {
                    let eff = &run[cell_index].efficiency;
                    *eff.get(t).unwrap_or_else(|| eff.last().expect("nonempty"))
                })
                .collect();
            let (mean, se) = mean_and_stderr(&samples);
            mean_row.push(mean);
            se_row.push(se);
        }
        values.push(mean_row);
        stderr.push(se_row);
    }
    HeatmapMatrix {
        kind: HeatmapKind::Efficiency,
        rows: row_labels.to_vec(),
        cols,
        values,
        stderr,
    }
}

/// Normalized time at which the curve settles within `epsilon` of zero:
/// the first bin after the last excursion, 0 if the curve never leaves the
/// band, `None` if the final bin is still outside it.
pub fn time_to_equality(curve: &EqualityCurve, epsilon: f64) -> Option<f64> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let bins = curve.delta.len();
    let last_excursion = curve
        .delta
        .iter()
        .rposition(|&d| d.abs() > epsilon);
    match last_excursion {
        None => Some(0.0),
        Some(i) if i + 1 == bins => None,
        Some(i) => Some((i + 2) as f64 / bins as f64),
    }
}

/// Mean raw steps until the total infected fraction reaches `fraction`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageSummary {
    /// Mean over the runs that reached the fraction; `None` if none did.
    pub mean_steps: Option<f64>,
    pub reached: usize,
    pub unreached: usize,
    /// First qualifying step per run (`None` for runs that never reached).
    pub per_run: Vec<Option<usize>>,
}

/// Scans per-run efficiency curves for the first step with
/// `I(t) >= fraction`. Runs that never reach it are excluded from the mean
/// and counted.
pub fn time_to_coverage(efficiency_curves: &[Vec<f64>], fraction: f64) -> CoverageSummary {
    assert!(
        fraction > 0.0 && fraction <= 1.0,
        "fraction must lie in (0, 1]"
    );
    let per_run: Vec<Option<usize>> = efficiency_curves
        .iter()
        .map(|curve| curve.iter().position(|&v| v >= fraction))
        .collect();
    let reached: Vec<usize> = per_run.iter().flatten().copied().collect();
    let mean_steps = if reached.is_empty() {
        None
    } else {
        Some(reached.iter().sum::<usize>() as f64 / reached.len() as f64)
    };
    CoverageSummary {
        mean_steps,
        reached: reached.len(),
        unreached: per_run.len() - reached.len(),
        per_run,
    }
}
