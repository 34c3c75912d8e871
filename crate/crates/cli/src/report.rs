//! CSV serialization of simulation results.
//!
//! Curves use long form (`run,step,group,value` / `run,bin,series,value`),
//! heatmaps use wide form (one row per axis value, one column per time bin
//! or step). All numbers are written with Rust's shortest round-trip float
//! formatting, so identical results serialize to identical bytes.

use std::fmt::Write as _;

use fairnet_core::contagion::{EqualityCurve, SpreadTrace};
use fairnet_core::experiments::HeatmapMatrix;
use fairnet_core::measures::MeasureReport;

fn push_row(out: &mut String, fields: &[&str]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

fn num(v: f64) -> String {
    format!("{v}")
}

/// Long-form per-step infected counts: `run,step,group,infected`.
pub fn trace_csv(run_id: u64, trace: &SpreadTrace) -> String {
    let mut out = String::from("run,step,group,infected\n");
    for t in 0..=trace.termination_step() {
        writeln!(out, "{run_id},{t},maj,{}", trace.infected_maj[t]).unwrap();
        writeln!(out, "{run_id},{t},min,{}", trace.infected_min[t]).unwrap();
    }
    out
}

/// Long-form equality curve: `run,bin,series,value` with the bin written as
/// normalized time and series in {delta, frac-maj, frac-min}.
pub fn equality_csv(run_id: u64, curve: &EqualityCurve) -> String {
    let mut out = String::from("run,bin,series,value\n");
    let bins = curve.bins();
    for b in 0..bins {
        let time = num((b + 1) as f64 / bins as f64);
        writeln!(out, "{run_id},{time},delta,{}", num(curve.delta[b])).unwrap();
        writeln!(out, "{run_id},{time},frac-maj,{}", num(curve.frac_maj[b])).unwrap();
        writeln!(out, "{run_id},{time},frac-min,{}", num(curve.frac_min[b])).unwrap();
    }
    out
}

/// Long-form total infected fraction: `run,step,series,value`.
pub fn efficiency_csv(run_id: u64, efficiency: &[f64]) -> String {
    let mut out = String::from("run,step,series,value\n");
    for (t, value) in efficiency.iter().enumerate() {
        writeln!(out, "{run_id},{t},total,{}", num(*value)).unwrap();
    }
    out
}

/// Wide-form heatmap: header `row,<col...>`, one line per axis value.
pub fn heatmap_csv(matrix: &HeatmapMatrix) -> String {
    heatmap_table(matrix, &matrix.values)
}

/// Wide-form per-cell standard errors, same shape as the value table.
pub fn heatmap_stderr_csv(matrix: &HeatmapMatrix) -> String {
    heatmap_table(matrix, &matrix.stderr)
}

fn heatmap_table(matrix: &HeatmapMatrix, table: &[Vec<f64>]) -> String {
    let mut out = String::from("row");
    for col in &matrix.cols {
        out.push(',');
        out.push_str(col);
    }
    out.push('\n');
    for (label, row) in matrix.rows.iter().zip(table.iter()) {
        out.push_str(label);
        for v in row {
            out.push(',');
            out.push_str(&num(*v));
        }
        out.push('\n');
    }
    out
}

const MEASURE_COLUMNS: [&str; 21] = [
    "nodes",
    "edges",
    "n_maj",
    "n_min",
    "e_mm",
    "e_nn",
    "e_cross",
    "avg_degree_maj",
    "avg_degree_min",
    "max_degree_maj",
    "max_degree_min",
    "dyadicity_maj",
    "dyadicity_min",
    "heterophilicity",
    "avg_shortest_path",
    "diameter",
    "distances_on_lcc",
    "distances_sampled",
    "emd",
    "power_inequality",
    "glass_ceiling",
];

/// One flat record per graph: a header row and a value row.
pub fn measure_csv(report: &MeasureReport) -> String {
    let mut out = String::new();
    push_row(&mut out, &MEASURE_COLUMNS);
    let values = [
        report.nodes.to_string(),
        report.edges.to_string(),
        report.n_maj.to_string(),
        report.n_min.to_string(),
        report.e_mm.to_string(),
        report.e_nn.to_string(),
        report.e_cross.to_string(),
        num(report.avg_degree_maj),
        num(report.avg_degree_min),
        report.max_degree_maj.to_string(),
        report.max_degree_min.to_string(),
        num(report.dyadicity_maj),
        num(report.dyadicity_min),
        num(report.heterophilicity),
        num(report.avg_shortest_path),
        report.diameter.to_string(),
        report.distances_on_lcc.to_string(),
        report.distances_sampled.to_string(),
        num(report.emd),
        num(report.power_inequality),
        num(report.glass_ceiling),
    ];
    let refs: Vec<&str> = values.iter().map(String::as_str).collect();
    push_row(&mut out, &refs);
    out
}

pub fn measure_json(report: &MeasureReport) -> String {
    let mut json = serde_json::to_string_pretty(report).expect("report serializes");
    json.push('\n');
    json
}
