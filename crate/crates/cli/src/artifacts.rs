//! Artifact emitters. All output is byte-deterministic for a given input:
//! floats use Rust's shortest-roundtrip formatting in CSV/JSON and a fixed
//! 4-decimal grid in SVG.

use std::fmt::Write as _;

use intercept_core::{DescentResult, LloydTrace, Partition, PursuitTrace, VehiclePos};

/// Fixed vehicle color palette, reused across SVG snapshots.
const PALETTE: [&str; 8] = [
    "#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `round,vehicle,x,y,grad_norm,region_length,expected_time` per vehicle per
/// round; `grad_norm` is empty for a vehicle whose region is empty.
pub fn lloyd_trace_csv(trace: &LloydTrace) -> String {
    let mut out = String::from("round,vehicle,x,y,grad_norm,region_length,expected_time\n");
    for rec in &trace.rounds {
        for (i, p) in rec.positions.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                rec.round,
                i + 1,
                p.x,
                p.y,
                fmt_opt(rec.grad_norms[i]),
                rec.partition.region(i).total_length(),
                rec.expected_time
            );
        }
    }
    out
}

/// `iteration,x,y,cost` for a single-vehicle descent.
pub fn descent_trace_csv(result: &DescentResult) -> String {
    let mut out = String::from("iteration,x,y,cost\n");
    for (i, (p, cost)) in result.trace.iter().enumerate() {
        let _ = writeln!(out, "{},{},{},{}", i, p.x, p.y, cost);
    }
    out
}

/// `t,px,py,ex,ey` per simulation step.
pub fn pursuit_csv(trace: &PursuitTrace) -> String {
    let mut out = String::from("t,px,py,ex,ey\n");
    for (k, (p, e)) in trace.pursuer.iter().zip(&trace.evader).enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            k as f64 * trace.dt,
            p.x,
            p.y,
            e.x,
            e.y
        );
    }
    out
}

/// `[{"vehicle": i, "intervals": [[lo, hi], ...]}, ...]` (1-based vehicles).
pub fn partition_json_value(part: &Partition) -> serde_json::Value {
    serde_json::Value::Array(
        part.regions()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                serde_json::json!({
                    "vehicle": i + 1,
                    "intervals": r
                        .intervals()
                        .iter()
                        .map(|iv| serde_json::json!([iv.lo, iv.hi]))
                        .collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

/// Per-round partitions of a descent run.
pub fn lloyd_partitions_json(trace: &LloydTrace) -> String {
    let rounds: Vec<serde_json::Value> = trace
        .rounds
        .iter()
        .map(|rec| {
            serde_json::json!({
                "round": rec.round,
                "regions": partition_json_value(&rec.partition),
            })
        })
        .collect();
    serde_json::to_string_pretty(&rounds).expect("serializable") + "\n"
}

pub fn partition_json(part: &Partition) -> String {
    serde_json::to_string_pretty(&partition_json_value(part)).expect("serializable") + "\n"
}

fn px(v: f64) -> String {
    format!("{v:.4}")
}

/// One SVG snapshot: generator axis, density profile, color-coded region
/// bars, and vehicle markers. Fixed 800x400 viewport mapping
/// [0, W] x [0, 1.2 * max Y].
pub fn svg_snapshot(
    width: f64,
    density: &intercept_core::Density,
    positions: &[VehiclePos],
    part: &Partition,
    title: &str,
) -> String {
    const VW: f64 = 800.0;
    const VH: f64 = 400.0;
    const MARGIN: f64 = 40.0;
    let max_y = positions.iter().map(|p| p.y).fold(0.25, f64::max) * 1.2;
    let sx = |x: f64| MARGIN + (VW - 2.0 * MARGIN) * x / width;
    let sy = |y: f64| (VH - MARGIN) - (VH - 2.0 * MARGIN) * y / max_y;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="400" viewBox="0 0 800 400">"#
    );
    let _ = writeln!(s, r#"<rect width="800" height="400" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" font-family="monospace" font-size="13">{}</text>"#,
        px(MARGIN),
        title
    );
    // Generator segment.
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"/>"#,
        px(sx(0.0)),
        px(sy(0.0)),
        px(sx(width)),
        px(sy(0.0))
    );
    // Density profile, drawn to a fixed 80px band above the axis.
    let bound = density.bound();
    let mut pts = Vec::new();
    for k in 0..=200 {
        let x = width * k as f64 / 200.0;
        let v = density.evaluate(x).unwrap_or(0.0);
        pts.push(format!("{},{}", px(sx(x)), px(sy(0.0) - 80.0 * v / bound)));
    }
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#555555" stroke-width="1" stroke-dasharray="4 3"/>"##,
        pts.join(" ")
    );
    // Region bars, one row per vehicle below the axis.
    for (i, region) in part.regions().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = sy(0.0) + 8.0 + 7.0 * i as f64;
        for iv in region.intervals() {
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="5"/>"#,
                px(sx(iv.lo)),
                px(y),
                px(sx(iv.hi)),
                px(y),
                color
            );
        }
    }
    // Vehicles.
    for (i, p) in positions.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="6" fill="{}" stroke="black" stroke-width="1"/>"#,
            px(sx(p.x)),
            px(sy(p.y)),
            color
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="11">{}</text>"#,
            px(sx(p.x) + 8.0),
            px(sy(p.y) - 6.0),
            i + 1
        );
    }
    s.push_str("</svg>\n");
    s
}
