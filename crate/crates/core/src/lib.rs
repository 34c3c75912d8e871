//! Simulation engine for studying how information spreads through two-group
//! (majority/minority) networks.
//!
//! The crate has five building blocks, layered bottom-up:
//!
//! - [`graph`]: the labeled undirected graph plus BFS and component extraction.
//! - [`generators`]: growth models combining homophily, preferential
//!   attachment, and diversified linking.
//! - [`measures`]: structural and group-equality statistics of a graph
//!   (dyadicity, heterophilicity, distances, degree-equality measures).
//! - [`contagion`]: discrete-time SI spreading with simple or complex
//!   (threshold-gated) contagion and group-dependent transmission rates.
//! - [`experiments`]: declarative parameter sweeps that aggregate many
//!   realizations into heatmap matrices.
//!
//! All randomness is derived from 64-bit seeds through [`seeds::derive_seed`],
//! so every run is reproducible bit-for-bit.

pub mod contagion;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod measures;
pub mod seeds;

pub use contagion::{
    ContagionConfig, ContagionError, ContagionKind, EqualityCurve, SeedingBucket, SpreadTrace,
    TerminalReason,
};
pub use experiments::{HeatmapKind, HeatmapMatrix, SweepAxis, SweepOutput, SweepSpec};
pub use generators::{GeneratorConfig, GeneratorError, Generation, GrowthStats, ModelPreset};
pub use graph::{Group, GroupTally, GraphError, LabeledGraph, NodeId};
pub use measures::{MeasureError, MeasureReport};
