//! Discrete-time SI (susceptible-infectious) spreading with group-dependent
//! transmission rates.
//!
//! Both contagion kinds share the same per-edge transmission: each infected
//! neighbor of a susceptible node independently transmits with the rate for
//! its group pair (`r_within` inside a group, `r_between` across), and the
//! node becomes infected when any attempt succeeds. Complex contagion adds
//! an eligibility gate in front: a node can only be infected once at least a
//! fraction `activation_threshold` of its neighborhood is infected
//! (inclusive, so `activation_threshold = 0` reduces exactly to simple
//! contagion).
//!
//! Updates are synchronous; one step is one time unit. A run ends when the
//! graph is fully infected, when no susceptible node is eligible (stall), or
//! at the step cap. For stalled runs the trace is truncated to the last step
//! at which an infection occurred.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Group, LabeledGraph, NodeId};
use crate::seeds;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContagionKind {
    Simple,
    Complex,
}

impl ContagionKind {
    pub fn token(self) -> &'static str {
        match self {
            ContagionKind::Simple => "simple",
            ContagionKind::Complex => "complex",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "simple" => Some(ContagionKind::Simple),
            "complex" => Some(ContagionKind::Complex),
            _ => None,
        }
    }
}

/// Constraint on the minority share of the randomly drawn seed set:
/// low keeps minority seeds below 30%, mid between 30% and 70% (inclusive),
/// high above 70%.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedingBucket {
    Low,
    Mid,
    High,
}

impl SeedingBucket {
    pub fn token(self) -> &'static str {
        match self {
            SeedingBucket::Low => "low",
            SeedingBucket::Mid => "mid",
            SeedingBucket::High => "high",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "low" => Some(SeedingBucket::Low),
            "mid" => Some(SeedingBucket::Mid),
            "high" => Some(SeedingBucket::High),
            _ => None,
        }
    }

    /// Inclusive bounds on the minority seed count `k` for `s` seeds,
    /// evaluated in exact integer arithmetic (10k vs 3s / 7s).
    fn k_bounds(self, s: usize) -> (usize, usize) {
        match self {
            // k < 0.3 s
            SeedingBucket::Low => (0, (3 * s).div_ceil(10) - 1),
            // 0.3 s <= k <= 0.7 s
            SeedingBucket::Mid => ((3 * s).div_ceil(10), 7 * s / 10),
            // k > 0.7 s
            SeedingBucket::High => (7 * s / 10 + 1, s),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContagionError {
    #[error("invalid contagion config: {0}")]
    InvalidConfig(String),
    #[error(
        "seeding bucket {bucket} unsatisfiable for s = {seed_count}: \
         maximum achievable minority seed count is {max_achievable_k}"
    )]
    Seeding {
        bucket: &'static str,
        seed_count: usize,
        max_achievable_k: usize,
    },
    #[error("trace terminated at step 0; normalized curves are undefined")]
    DegenerateTrace,
    #[error("equality curve needs both groups non-empty")]
    EmptyGroup,
}

/// All parameters of one spreading process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContagionConfig {
    pub kind: ContagionKind,
    /// Activation threshold `a` for complex contagion; ignored for simple.
    pub activation_threshold: f64,
    /// Transmission probability between same-group nodes.
    pub r_within: f64,
    /// Transmission probability between opposite-group nodes;
    /// `r_between = r_within` is the symmetric setting.
    pub r_between: f64,
    /// Number of seed nodes `s`.
    pub seed_count: usize,
    pub bucket: SeedingBucket,
    /// Hard cap on the number of steps.
    pub max_steps: usize,
    /// Number of normalized-time bins `B` for the equality curve.
    pub bins: usize,
    pub rng_seed: u64,
}

impl Default for ContagionConfig {
    fn default() -> Self {
        ContagionConfig {
            kind: ContagionKind::Simple,
            activation_threshold: 0.1,
            r_within: 0.7,
            r_between: 0.7,
            seed_count: 10,
            bucket: SeedingBucket::Low,
            max_steps: 100_000,
            bins: 100,
            rng_seed: 0,
        }
    }
}

impl ContagionConfig {
    pub fn validate(&self) -> Result<(), ContagionError> {
        let fail = |msg: String| Err(ContagionError::InvalidConfig(msg));
        if !(0.0..=1.0).contains(&self.activation_threshold) {
            return fail(format!(
                "activation_threshold must lie in [0, 1], got {}",
                self.activation_threshold
            ));
        }
        if !(0.0..=1.0).contains(&self.r_within) || !(0.0..=1.0).contains(&self.r_between) {
            return fail(format!(
                "transmission rates must lie in [0, 1], got within={} between={}",
                self.r_within, self.r_between
            ));
        }
        if self.r_between > self.r_within {
            return fail(format!(
                "r_between ({}) must not exceed r_within ({})",
                self.r_between, self.r_within
            ));
        }
        if self.seed_count == 0 {
            return fail("seed_count must be at least 1".to_string());
        }
        if self.max_steps == 0 {
            return fail("max_steps must be at least 1".to_string());
        }
        if self.bins == 0 {
            return fail("bins must be at least 1".to_string());
        }
        Ok(())
    }
}

/// Why a run terminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalReason {
    AllInfected,
    Stalled,
    StepCap,
}

impl TerminalReason {
    pub fn token(self) -> &'static str {
        match self {
            TerminalReason::AllInfected => "all-infected",
            TerminalReason::Stalled => "stalled",
            TerminalReason::StepCap => "step-cap",
        }
    }
}

/// Group-wise infected counts of one run, for `t = 0..=T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadTrace {
    pub infected_maj: Vec<usize>,
    pub infected_min: Vec<usize>,
    pub terminal: TerminalReason,
    /// Seed node ids, sorted.
    pub seeds: Vec<NodeId>,
    pub seed_minority_count: usize,
}

impl SpreadTrace {
    /// The termination step `T`; traces always contain step 0.
    pub fn termination_step(&self) -> usize {
        self.infected_maj.len() - 1
    }

    pub fn total_infected(&self, step: usize) -> usize {
        self.infected_maj[step] + self.infected_min[step]
    }
}

/// The group-gap curve resampled onto `B` uniform bins of normalized time
/// `t/T`. Every value lies in `[-1, 1]`; 0 means equal within-group infected
/// fractions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityCurve {
    pub delta: Vec<f64>,
    pub frac_maj: Vec<f64>,
    pub frac_min: Vec<f64>,
}

impl EqualityCurve {
    pub fn bins(&self) -> usize {
        self.delta.len()
    }
}

/// Per-edge transmission probability for an infected `source` attacking a
/// susceptible `target`.
pub fn transmission_rate(source: Group, target: Group, config: &ContagionConfig) -> f64 {
    if source == target {
        config.r_within
    } else {
        config.r_between
    }
}

/// Draws the seed set: a minority seed count `k` uniform over the integers
/// the bucket allows (clipped to group availability), then `k` minority and
/// `s - k` majority nodes uniformly without replacement.
pub fn select_seeds(
    graph: &LabeledGraph,
    seed_count: usize,
    bucket: SeedingBucket,
    rng: &mut impl Rng,
) -> Result<Vec<NodeId>, ContagionError> {
    let s = seed_count;
    if s == 0 || s > graph.node_count() {
        return Err(ContagionError::InvalidConfig(format!(
            "seed_count {} must lie in 1..={}",
            s,
            graph.node_count()
        )));
    }
    let minority: Vec<NodeId> = graph
        .nodes()
        .filter(|&v| graph.group(v) == Group::Minority)
        .collect();
    let majority: Vec<NodeId> = graph
        .nodes()
        .filter(|&v| graph.group(v) == Group::Majority)
        .collect();
    let (bucket_lo, bucket_hi) = bucket.k_bounds(s);
    // k minority seeds requires k <= n_min and s - k <= n_maj.
    let lo = bucket_lo.max(s.saturating_sub(majority.len()));
    let hi = bucket_hi.min(minority.len());
    if lo > hi {
        return Err(ContagionError::Seeding {
            bucket: bucket.token(),
            seed_count: s,
            max_achievable_k: minority.len().min(s),
        });
    }
    let k = rng.gen_range(lo..=hi);
    let mut seeds: Vec<NodeId> = rand::seq::index::sample(rng, minority.len(), k)
        .into_iter()
        .map(|i| minority[i])
        .collect();
    seeds.extend(
        rand::seq::index::sample(rng, majority.len(), s - k)
            .into_iter()
            .map(|i| majority[i]),
    );
    seeds.sort_unstable();
    Ok(seeds)
}

struct SpreadState {
    infected: Vec<bool>,
    inf_nbrs_maj: Vec<u32>,
    inf_nbrs_min: Vec<u32>,
    infected_maj: usize,
    infected_min: usize,
}

enum StepOutcome {
    /// Some susceptible node was eligible; carries the newly infected count.
    Advanced(usize),
    /// No susceptible node is eligible: the process can never progress.
    NoEligible,
}

impl SpreadState {
    fn seeded(graph: &LabeledGraph, seeds: &[NodeId]) -> Self {
        let n = graph.node_count();
        let mut state = SpreadState {
            infected: vec![false; n],
            inf_nbrs_maj: vec![0; n],
            inf_nbrs_min: vec![0; n],
            infected_maj: 0,
            infected_min: 0,
        };
        for &seed in seeds {
            state.infect(graph, seed);
        }
        state
    }

    fn infect(&mut self, graph: &LabeledGraph, node: NodeId) {
        debug_assert!(!self.infected[node], "node infected twice");
        self.infected[node] = true;
        match graph.group(node) {
            Group::Majority => self.infected_maj += 1,
            Group::Minority => self.infected_min += 1,
        }
        for &nbr in graph.neighbors(node) {
            match graph.group(node) {
                Group::Majority => self.inf_nbrs_maj[nbr] += 1,
                Group::Minority => self.inf_nbrs_min[nbr] += 1,
            }
        }
    }

    fn total_infected(&self) -> usize {
        self.infected_maj + self.infected_min
    }

    /// One synchronous step: eligibility and attack counts are evaluated
    /// against the pre-step infected set.
    fn advance(
        &mut self,
        graph: &LabeledGraph,
        config: &ContagionConfig,
        rng: &mut impl Rng,
    ) -> StepOutcome {
        let mut newly: Vec<NodeId> = Vec::new();
        let mut any_eligible = false;
        for v in graph.nodes() {
            if self.infected[v] {
                continue;
            }
            let c_maj = self.inf_nbrs_maj[v];
            let c_min = self.inf_nbrs_min[v];
            let exposed = c_maj + c_min;
            if exposed == 0 {
                continue;
            }
            if config.kind == ContagionKind::Complex {
                let degree = graph.neighbors(v).len() as f64;
                if f64::from(exposed) < config.activation_threshold * degree {
                    continue;
                }
            }
            any_eligible = true;
            let (c_same, c_cross) = match graph.group(v) {
                Group::Majority => (c_maj, c_min),
                Group::Minority => (c_min, c_maj),
            };
            let p_fail = (1.0 - config.r_within).powi(c_same as i32)
                * (1.0 - config.r_between).powi(c_cross as i32);
            if rng.gen::<f64>() < 1.0 - p_fail {
                newly.push(v);
            }
        }
        if !any_eligible {
            return StepOutcome::NoEligible;
        }
        let count = newly.len();
        for v in newly {
            self.infect(graph, v);
        }
        StepOutcome::Advanced(count)
    }
}

/// One synchronous step from an explicit infected set; returns the newly
/// infected nodes (ascending). Exposed for oracle-style tests; `simulate`
/// drives the same state machine incrementally.
pub fn step(
    graph: &LabeledGraph,
    infected: &[NodeId],
    config: &ContagionConfig,
    rng: &mut impl Rng,
) -> Vec<NodeId> {
    let mut state = SpreadState::seeded(graph, infected);
    let before = state.infected.clone();
    match state.advance(graph, config, rng) {
        StepOutcome::NoEligible => Vec::new(),
        StepOutcome::Advanced(_) => graph
            .nodes()
            .filter(|&v| state.infected[v] && !before[v])
            .collect(),
    }
}

/// Runs the full process: seed selection, then synchronous steps until the
/// graph is fully infected, the process stalls, or `max_steps` is reached.
/// Deterministic given `config.rng_seed`.
pub fn simulate(graph: &LabeledGraph, config: &ContagionConfig) -> Result<SpreadTrace, ContagionError> {
    config.validate()?;
    if graph.node_count() == 0 {
        return Err(ContagionError::InvalidConfig(
            "cannot simulate on an empty graph".to_string(),
        ));
    }
    let mut rng = seeds::rng_for(config.rng_seed);
    let seed_nodes = select_seeds(graph, config.seed_count, config.bucket, &mut rng)?;
    let seed_minority_count = seed_nodes
        .iter()
        .filter(|&&v| graph.group(v) == Group::Minority)
        .count();
    let mut state = SpreadState::seeded(graph, &seed_nodes);

    let mut infected_maj = vec![state.infected_maj];
    let mut infected_min = vec![state.infected_min];
    let mut last_infection_step = 0;
    let n = graph.node_count();

    let mut terminal = if state.total_infected() == n {
        TerminalReason::AllInfected
    } else {
        TerminalReason::StepCap
    };
    if state.total_infected() < n {
        let mut step_index = 0;
        while step_index < config.max_steps {
            match state.advance(graph, config, &mut rng) {
                StepOutcome::NoEligible => {
                    terminal = TerminalReason::Stalled;
                    break;
                }
                StepOutcome::Advanced(newly) => {
                    step_index += 1;
                    infected_maj.push(state.infected_maj);
                    infected_min.push(state.infected_min);
                    if newly > 0 {
                        last_infection_step = step_index;
                    }
                    if state.total_infected() == n {
                        terminal = TerminalReason::AllInfected;
                        break;
                    }
                }
            }
        }
    }
    if terminal == TerminalReason::Stalled {
        // T is the last step at which any infection occurred.
        infected_maj.truncate(last_infection_step + 1);
        infected_min.truncate(last_infection_step + 1);
    }
    Ok(SpreadTrace {
        infected_maj,
        infected_min,
        terminal,
        seeds: seed_nodes,
        seed_minority_count,
    })
}

/// The gap between within-group infected fractions:
/// `(I_maj - I_min) / (I_maj + I_min)`, with `0/0` defined as 0.
fn delta_i(frac_maj: f64, frac_min: f64) -> f64 {
    let total = frac_maj + frac_min;
    if total == 0.0 {
        0.0
    } else {
        (frac_maj - frac_min) / total
    }
}

/// Resamples the per-step gap onto `bins` uniform bins of `t/T` by
/// nearest-step lookup. Requires `T >= 1`.
pub fn equality_curve(
    trace: &SpreadTrace,
    graph: &LabeledGraph,
    bins: usize,
) -> Result<EqualityCurve, ContagionError> {
    if bins == 0 {
        return Err(ContagionError::InvalidConfig("bins must be at least 1".to_string()));
    }
    let t_final = trace.termination_step();
    if t_final == 0 {
        return Err(ContagionError::DegenerateTrace);
    }
    let tally = graph.group_tally();
    if tally.n_maj == 0 || tally.n_min == 0 {
        return Err(ContagionError::EmptyGroup);
    }
    let mut delta = Vec::with_capacity(bins);
    let mut frac_maj = Vec::with_capacity(bins);
    let mut frac_min = Vec::with_capacity(bins);
    for b in 1..=bins {
        let t = ((b as f64 / bins as f64) * t_final as f64).round() as usize;
        let fm = trace.infected_maj[t] as f64 / tally.n_maj as f64;
        let fn_ = trace.infected_min[t] as f64 / tally.n_min as f64;
        delta.push(delta_i(fm, fn_));
        frac_maj.push(fm);
        frac_min.push(fn_);
    }
    Ok(EqualityCurve {
        delta,
        frac_maj,
        frac_min,
    })
}

/// Total infected fraction `I(t)` in raw time, for `t = 0..=T`.
pub fn efficiency_curve(trace: &SpreadTrace, graph: &LabeledGraph) -> Vec<f64> {
    let n = graph.node_count() as f64;
    (0..=trace.termination_step())
        .map(|t| trace.total_infected(t) as f64 / n)
        .collect()
}
