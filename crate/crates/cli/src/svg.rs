//! Dependency-free SVG heatmap rendering.
//!
//! Equality maps use a diverging scale clamped to [-1, 1]: blue for negative
//! values (minority advantage), white at zero, red for positive (majority
//! advantage). Efficiency maps use a sequential white-to-red scale on
//! [0, 1].

use std::fmt::Write as _;

use fairnet_core::experiments::{HeatmapKind, HeatmapMatrix};

const RED: (f64, f64, f64) = (178.0, 24.0, 43.0);
const BLUE: (f64, f64, f64) = (33.0, 102.0, 172.0);
const WHITE: (f64, f64, f64) = (255.0, 255.0, 255.0);

fn lerp(a: (f64, f64, f64), b: (f64, f64, f64), t: f64) -> (f64, f64, f64) {
    (
        a.0 + (b.0 - a.0) * t,
        a.1 + (b.1 - a.1) * t,
        a.2 + (b.2 - a.2) * t,
    )
}

fn hex(color: (f64, f64, f64)) -> String {
    format!(
        "#{:02x}{:02x}{:02x}",
        color.0.round() as u8,
        color.1.round() as u8,
        color.2.round() as u8
    )
}

/// Diverging scale for values in [-1, 1]; out-of-range values clamp.
pub fn equality_color(value: f64) -> String {
    let v = value.clamp(-1.0, 1.0);
    if v >= 0.0 {
        hex(lerp(WHITE, RED, v))
    } else {
        hex(lerp(WHITE, BLUE, -v))
    }
}

/// Sequential scale for values in [0, 1]; out-of-range values clamp.
pub fn efficiency_color(value: f64) -> String {
    hex(lerp(WHITE, RED, value.clamp(0.0, 1.0)))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the matrix as a fixed-grid SVG heatmap with row labels, sparse
/// x-axis tick labels, and a title.
pub fn heatmap_svg(matrix: &HeatmapMatrix, title: &str) -> String {
    let rows = matrix.rows.len().max(1);
    let cols = matrix.cols.len().max(1);
    let left = 200.0;
    let top = 48.0;
    let bottom = 36.0;
    let right = 16.0;
    let grid_width = 760.0;
    let cell_w = grid_width / cols as f64;
    let cell_h = 24.0;
    let width = left + grid_width + right;
    let height = top + rows as f64 * cell_h + bottom;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\">"
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{:.1}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
        left + grid_width / 2.0,
        escape(title)
    )
    .unwrap();

    for (r, (label, row)) in matrix.rows.iter().zip(matrix.values.iter()).enumerate() {
        let y = top + r as f64 * cell_h;
        writeln!(
            out,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            left - 8.0,
            y + cell_h / 2.0 + 4.0,
            escape(label)
        )
        .unwrap();
        for (c, value) in row.iter().enumerate() {
            let color = match matrix.kind {
                HeatmapKind::Equality => equality_color(*value),
                HeatmapKind::Efficiency => efficiency_color(*value),
            };
            writeln!(
                out,
                "  <rect x=\"{:.2}\" y=\"{:.1}\" width=\"{:.2}\" height=\"{:.1}\" fill=\"{}\"/>",
                left + c as f64 * cell_w,
                y,
                cell_w + 0.05,
                cell_h,
                color
            )
            .unwrap();
        }
    }

    // Sparse x ticks: five roughly even positions.
    let tick_count = 5.min(cols);
    for i in 0..tick_count {
        let c = if tick_count == 1 {
            0
        } else {
            i * (cols - 1) / (tick_count - 1)
        };
        writeln!(
            out,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            left + (c as f64 + 0.5) * cell_w,
            top + rows as f64 * cell_h + 18.0,
            escape(&matrix.cols[c])
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}
