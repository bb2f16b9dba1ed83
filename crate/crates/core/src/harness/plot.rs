use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::metrics::median;
use crate::sched::RunRecord;

use super::exec::num;

pub const CONVERGENCE_HEADER: &str = "scheme,replicate,fe_s_used,igd";

/// Long-format convergence table: one row per recorded iteration.
pub fn convergence_csv(records: &[(usize, &RunRecord)]) -> String {
    let mut s = String::from(CONVERGENCE_HEADER);
    s.push('\n');
    for (rep, r) in records {
        for t in &r.trace {
            let _ = writeln!(s, "{},{rep},{},{}", r.scheme, t.fe_s_used, num(t.igd));
        }
    }
    s
}

/// Median IGD per scheme at every slow-evaluation count seen in the data.
/// Schemes keep their first-appearance order.
pub fn median_curves(records: &[(usize, &RunRecord)]) -> Vec<(String, Vec<(usize, f64)>)> {
    let mut order: Vec<String> = Vec::new();
    let mut points: BTreeMap<String, BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for (_, r) in records {
        let id = r.scheme.id().to_string();
        if !order.contains(&id) {
            order.push(id.clone());
        }
        let by_fe = points.entry(id).or_default();
        for t in &r.trace {
            by_fe.entry(t.fe_s_used).or_default().push(t.igd);
        }
    }
    order
        .into_iter()
        .map(|id| {
            let curve = points[&id].iter().map(|(&fe, v)| (fe, median(v))).collect();
            (id, curve)
        })
        .collect()
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Minimal line chart of the median curves, log-scaled IGD.
pub fn convergence_svg(curves: &[(String, Vec<(usize, f64)>)]) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let all: Vec<(usize, f64)> = curves
        .iter()
        .flat_map(|(_, c)| c.iter().copied())
        .filter(|(_, v)| v.is_finite() && *v > 0.0)
        .collect();
    let mut s = format!(r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">"#);
    s.push('\n');
    if all.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let x_lo = all.iter().map(|p| p.0).min().unwrap() as f64;
    let x_hi = (all.iter().map(|p| p.0).max().unwrap() as f64).max(x_lo + 1.0);
    let y_lo = all.iter().map(|p| p.1.log10()).fold(f64::INFINITY, f64::min);
    let y_hi = all.iter().map(|p| p.1.log10()).fold(f64::NEG_INFINITY, f64::max).max(y_lo + 1e-9);
    let px = |x: f64| pad + (x - x_lo) / (x_hi - x_lo) * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y.log10() - y_lo) / (y_hi - y_lo) * (h - 2.0 * pad);
    let _ = writeln!(
        s,
        r##"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="#000"/>"##,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">FE_s</text>"#, w / 2.0, h - 15.0);
    let _ = writeln!(s, r#"<text x="15" y="{}" transform="rotate(-90 15 {})" text-anchor="middle">median IGD (log)</text>"#, h / 2.0, h / 2.0);
    for (i, (id, curve)) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = curve
            .iter()
            .filter(|(_, v)| v.is_finite() && *v > 0.0)
            .map(|&(fe, v)| format!("{:.2},{:.2}", px(fe as f64), py(v)))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{id}</text>"#,
            w - pad + 5.0 - 40.0,
            pad + 15.0 + 15.0 * i as f64
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes the long-format CSV and, when `svg` is given, the median chart.
pub fn emit_convergence(records: &[(usize, &RunRecord)], path: &Path, svg: Option<&Path>) -> Result<()> {
    fs::write(path, convergence_csv(records))?;
    if let Some(svg) = svg {
        fs::write(svg, convergence_svg(&median_curves(records)))?;
    }
    Ok(())
}
