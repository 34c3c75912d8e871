//! The declarative sweep spec file: flat TOML with one table per config
//! template.
//!
//! ```toml
//! axis = "preset"
//! values = ["random-network", "ba", "homophily-ba"]
//! realizations = 20
//! master-seed = 42
//!
//! [generator]
//! n = 5000
//! m = 0.2
//! l = 2
//! h = 0.8
//! alpha = 1.0
//! l-d = 1
//! p-d = 0.6
//!
//! [contagion]
//! a = 0.1
//! r-within = 0.7
//! r-between = 0.3
//! seeds = 10
//! bins = 100
//!
//! [grid]
//! kinds = ["simple", "complex"]
//! rates = ["symmetric", "asymmetric"]
//! buckets = ["low", "high"]
//! ```
//!
//! Axis tokens: `preset`, `homophily`, `alpha`, `minority-fraction`,
//! `diversification`, `real-network`. The first takes preset tokens in
//! `values`, the middle four take numbers, and `real-network` takes
//! `[[networks]]` tables (`label`, `path`, optional `drop-unlabeled` /
//! `take-lcc`) instead of `values`; paths resolve relative to the spec file.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use fairnet_core::contagion::{ContagionConfig, ContagionKind, SeedingBucket};
use fairnet_core::experiments::{RateMode, SweepAxis, SweepSpec};
use fairnet_core::generators::{GeneratorConfig, ModelPreset};

use crate::edgelist::{parse_graph, IngestOptions};
use crate::error::CliError;

fn default_epsilon() -> f64 {
    0.05
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SweepFile {
    pub axis: String,
    #[serde(default)]
    pub values: Vec<toml::Value>,
    #[serde(default)]
    pub networks: Vec<NetworkRef>,
    pub realizations: usize,
    pub master_seed: u64,
    /// Threshold for the settled-within band of the summary statistic.
    #[serde(default = "default_epsilon")]
    pub equality_epsilon: f64,
    pub generator: GeneratorSection,
    pub contagion: ContagionSection,
    pub grid: GridSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct NetworkRef {
    pub label: String,
    pub path: String,
    #[serde(default)]
    pub drop_unlabeled: bool,
    #[serde(default = "default_true")]
    pub take_lcc: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct GeneratorSection {
    #[serde(default = "GeneratorSection::default_preset")]
    pub preset: String,
    pub n: usize,
    pub m: f64,
    pub l: usize,
    #[serde(default = "GeneratorSection::default_h")]
    pub h: f64,
    #[serde(default = "GeneratorSection::default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub l_d: usize,
    #[serde(default = "GeneratorSection::default_p_d")]
    pub p_d: f64,
}

impl GeneratorSection {
    fn default_preset() -> String {
        "homophily-ba".to_string()
    }
    fn default_h() -> f64 {
        0.8
    }
    fn default_alpha() -> f64 {
        1.0
    }
    fn default_p_d() -> f64 {
        0.6
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ContagionSection {
    #[serde(default = "ContagionSection::default_a")]
    pub a: f64,
    #[serde(default = "ContagionSection::default_r_within")]
    pub r_within: f64,
    #[serde(default = "ContagionSection::default_r_between")]
    pub r_between: f64,
    #[serde(default = "ContagionSection::default_seeds")]
    pub seeds: usize,
    #[serde(default = "ContagionSection::default_max_steps")]
    pub max_steps: usize,
    #[serde(default = "ContagionSection::default_bins")]
    pub bins: usize,
}

impl ContagionSection {
    fn default_a() -> f64 {
        0.1
    }
    fn default_r_within() -> f64 {
        0.7
    }
    fn default_r_between() -> f64 {
        0.3
    }
    fn default_seeds() -> usize {
        10
    }
    fn default_max_steps() -> usize {
        100_000
    }
    fn default_bins() -> usize {
        100
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct GridSection {
    pub kinds: Vec<String>,
    pub rates: Vec<String>,
    pub buckets: Vec<String>,
}

impl SweepFile {
    pub fn parse(text: &str) -> Result<SweepFile, CliError> {
        toml::from_str(text).map_err(|e| CliError::Data(format!("sweep spec: {e}")))
    }

    /// Turns the parsed file into a runnable spec. `base_dir` anchors
    /// relative real-network paths (normally the spec file's directory).
    pub fn resolve(&self, base_dir: &Path) -> Result<SweepSpec, CliError> {
        let preset = ModelPreset::from_token(&self.generator.preset).ok_or_else(|| {
            CliError::Data(format!("unknown preset \"{}\"", self.generator.preset))
        })?;
        let generator = GeneratorConfig {
            preset,
            n: self.generator.n,
            minority_fraction: self.generator.m,
            links_per_node: self.generator.l,
            homophily: self.generator.h,
            alpha: self.generator.alpha,
            diversified_links: self.generator.l_d,
            diversification: self.generator.p_d,
            rng_seed: 0,
        };
        let contagion = ContagionConfig {
            kind: ContagionKind::Simple,
            activation_threshold: self.contagion.a,
            r_within: self.contagion.r_within,
            r_between: self.contagion.r_between,
            seed_count: self.contagion.seeds,
            bucket: SeedingBucket::Low,
            max_steps: self.contagion.max_steps,
            bins: self.contagion.bins,
            rng_seed: 0,
        };

        let numbers = || -> Result<Vec<f64>, CliError> {
            self.values
                .iter()
                .map(|v| match v {
                    toml::Value::Float(f) => Ok(*f),
                    toml::Value::Integer(i) => Ok(*i as f64),
                    other => Err(CliError::Data(format!(
                        "axis value {other} is not a number"
                    ))),
                })
                .collect()
        };
        let axis = match self.axis.as_str() {
            "preset" => {
                let presets = self
                    .values
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .and_then(ModelPreset::from_token)
                            .ok_or_else(|| CliError::Data(format!("unknown preset value {v}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SweepAxis::Presets(presets)
            }
            "homophily" => SweepAxis::Homophily(numbers()?),
            "alpha" => SweepAxis::Alpha(numbers()?),
            "minority-fraction" => SweepAxis::MinorityFraction(numbers()?),
            "diversification" => SweepAxis::Diversification(numbers()?),
            "real-network" => {
                if self.networks.is_empty() {
                    return Err(CliError::Data(
                        "real-network axis needs at least one [[networks]] table".to_string(),
                    ));
                }
                let mut rows = Vec::new();
                for network in &self.networks {
                    let path = base_dir.join(&network.path);
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        CliError::Data(format!("cannot read {}: {e}", path.display()))
                    })?;
                    let options = IngestOptions {
                        drop_unlabeled: network.drop_unlabeled,
                        take_lcc: network.take_lcc,
                    };
                    let (graph, _) = parse_graph(&text, options)
                        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                    rows.push((network.label.clone(), Arc::new(graph)));
                }
                SweepAxis::RealNetworks(rows)
            }
            other => {
                return Err(CliError::Data(format!("unknown sweep axis \"{other}\"")));
            }
        };

        let kinds = self
            .grid
            .kinds
            .iter()
            .map(|t| {
                ContagionKind::from_token(t)
                    .ok_or_else(|| CliError::Data(format!("unknown contagion kind \"{t}\"")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rate_modes = self
            .grid
            .rates
            .iter()
            .map(|t| {
                RateMode::from_token(t)
                    .ok_or_else(|| CliError::Data(format!("unknown rate mode \"{t}\"")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let buckets = self
            .grid
            .buckets
            .iter()
            .map(|t| {
                SeedingBucket::from_token(t)
                    .ok_or_else(|| CliError::Data(format!("unknown seeding bucket \"{t}\"")))
            })
            .collect::<Result<Vec<_>, _>>()?;

        Ok(SweepSpec {
            axis,
            generator,
            contagion,
            realizations: self.realizations,
            kinds,
            rate_modes,
            buckets,
            master_seed: self.master_seed,
            keep_per_run: false,
        })
    }
}
