//! Hand-written SVG figures: the feasible region with iso-performance lines,
//! and the win heatmap.

use std::fmt::Write;

use pvoros_core::geometry::Line;
use pvoros_core::selection::{CellOutcome, HeatmapGrid};
use pvoros_core::{capacity_line, precision_line, FeasibleRegion, IsoLine, RocPoint};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn px(p: RocPoint) -> (f64, f64) {
    (MARGIN + p.fpr * SIZE, MARGIN + (1.0 - p.tpr) * SIZE)
}

/// The part of `line` inside the unit square, if any.
fn square_segment(line: &Line) -> Option<(RocPoint, RocPoint)> {
    let edges = [
        Line::new(1.0, 0.0, 0.0),
        Line::new(1.0, 0.0, 1.0),
        Line::new(0.0, 1.0, 0.0),
        Line::new(0.0, 1.0, 1.0),
    ];
    let inside = |p: &RocPoint| (-1e-12..=1.0 + 1e-12).contains(&p.fpr) && (-1e-12..=1.0 + 1e-12).contains(&p.tpr);
    let mut hits: Vec<RocPoint> = edges.iter().filter_map(|e| line.intersect(e)).filter(inside).collect();
    hits.sort_by(|a, b| a.fpr.total_cmp(&b.fpr).then(a.tpr.total_cmp(&b.tpr)));
    let (first, last) = (*hits.first()?, *hits.last()?);
    ((first.fpr - last.fpr).abs() + (first.tpr - last.tpr).abs() > 1e-12).then_some((first, last))
}

fn segment(out: &mut String, line: &Line, style: &str) {
    if let Some((a, b)) = square_segment(line) {
        let (x1, y1) = px(a);
        let (x2, y2) = px(b);
        let _ = writeln!(out, r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#);
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Region polygon, its bounding lines, and the given iso-lines with the
/// operating points they pass through.
pub fn region_svg(region: &FeasibleRegion, isolines: &[(String, IsoLine)]) -> String {
    let w = SIZE + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" viewBox="0 0 {w} {w}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r##"  <rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="white" stroke="#444"/>"##
    );
    let pts: Vec<String> = region
        .vertices()
        .iter()
        .map(|&p| {
            let (x, y) = px(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r##"  <polygon points="{}" fill="#9ecae1" fill-opacity="0.6" stroke="#08519c"/>"##,
        pts.join(" ")
    );
    let c = region.constraints();
    if c.alpha() > 0.0 {
        if let Ok(l) = precision_line(region.profile(), c.alpha()) {
            segment(&mut out, &l, r##"stroke="#08519c" stroke-dasharray="6 3""##);
        }
    }
    if let Ok(l) = capacity_line(region.profile(), c.kappa()) {
        segment(&mut out, &l, r##"stroke="#a50f15" stroke-dasharray="2 3""##);
    }
    for (i, (label, iso)) in isolines.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        segment(&mut out, &iso.line(), &format!(r#"stroke="{color}""#));
        let (x, y) = px(iso.anchor());
        let _ = writeln!(out, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#,
            MARGIN + SIZE + 5.0 - 120.0,
            MARGIN + 15.0 + 15.0 * i as f64,
            escape(label)
        );
    }
    let _ = writeln!(
        out,
        r#"  <text x="{}" y="{}" text-anchor="middle">false positive rate</text>"#,
        MARGIN + SIZE / 2.0,
        MARGIN + SIZE + 30.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">true positive rate</text>"#,
        MARGIN + SIZE / 2.0,
        MARGIN + SIZE / 2.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="{MARGIN}" y="30">{} (area {:.5})</text>"#,
        region.case().name(),
        region.area()
    );
    out.push_str("</svg>\n");
    out
}

/// Grid of winners: rows are precision limits (top = largest), columns are
/// capacity fractions.
pub fn heatmap_svg(grid: &HeatmapGrid) -> String {
    let cell = 32.0;
    let left = 70.0;
    let top = 30.0;
    let rows = grid.alphas.len();
    let cols = grid.kappa_fracs.len();
    let legend_w = 160.0;
    let width = left + cell * cols as f64 + legend_w;
    let height = top + cell * rows as f64 + 60.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    );
    for (r, &alpha) in grid.alphas.iter().enumerate() {
        // largest alpha on top
        let y = top + cell * (rows - 1 - r) as f64;
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{:.1}" text-anchor="end">{alpha:.3}</text>"#,
            left - 4.0,
            y + cell / 2.0 + 3.0
        );
        for c in 0..cols {
            let x = left + cell * c as f64;
            let cl = grid.cell(r, c);
            let fill = match cl.outcome {
                CellOutcome::Winner(i) => PALETTE[i % PALETTE.len()],
                CellOutcome::Tie => "#bdbdbd",
                CellOutcome::Invalid => "#ffffff",
            };
            let _ = writeln!(
                out,
                r##"  <rect x="{x:.1}" y="{y:.1}" width="{cell}" height="{cell}" fill="{fill}" stroke="#666"><title>alpha {alpha} kappa {} : {}</title></rect>"##,
                grid.kappa_fracs[c],
                escape(grid.label(cl))
            );
        }
    }
    for (c, &k) in grid.kappa_fracs.iter().enumerate() {
        let x = left + cell * c as f64 + cell / 2.0;
        let y = top + cell * rows as f64 + 12.0;
        let _ = writeln!(
            out,
            r#"  <text x="{x:.1}" y="{y:.1}" text-anchor="end" transform="rotate(-45 {x:.1} {y:.1})">{k}</text>"#
        );
    }
    let _ = writeln!(
        out,
        r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle">capacity (fraction of dataset)</text>"#,
        left + cell * cols as f64 / 2.0,
        height - 5.0
    );
    let _ = writeln!(out, r#"  <text x="5" y="{:.1}">alpha</text>"#, top - 10.0);
    let lx = left + cell * cols as f64 + 15.0;
    let mut entries: Vec<(String, &str)> = grid
        .names
        .iter()
        .enumerate()
        .map(|(i, n)| (escape(n), PALETTE[i % PALETTE.len()]))
        .collect();
    entries.push(("tie".into(), "#bdbdbd"));
    entries.push(("invalid".into(), "#ffffff"));
    for (i, (name, color)) in entries.iter().enumerate() {
        let y = top + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r##"  <rect x="{lx:.1}" y="{y:.1}" width="12" height="12" fill="{color}" stroke="#666"/>"##
        );
        let _ = writeln!(out, r#"  <text x="{:.1}" y="{:.1}">{name}</text>"#, lx + 18.0, y + 10.0);
    }
    out.push_str("</svg>\n");
    out
}
