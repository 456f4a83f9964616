//! Minimal SVG rendering for the figure runners. The CSV files are the
//! record; these plots are only for a quick look.

use std::fmt::Write as _;

use super::table::{Method, ResultTable};

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 5] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#666666"];

fn color(method: Method) -> &'static str {
    match method {
        Method::Additive => PALETTE[0],
        Method::Cp => PALETTE[1],
        Method::Cv => PALETTE[2],
        Method::Bootstrap => PALETTE[3],
        Method::Truth => PALETTE[4],
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

struct Frame {
    lo: f64,
    hi: f64,
}

impl Frame {
    fn new(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        Self { lo: lo - pad, hi: hi + pad }
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.lo) / (self.hi - self.lo) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str, frame: &Frame) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{}" stroke="black"/>"#,
        HEIGHT - MARGIN
    );
    for t in 0..=4 {
        let v = frame.lo + (frame.hi - frame.lo) * t as f64 / 4.0;
        let y = frame.y(v);
        let _ = writeln!(out, r#"<text x="{}" y="{y:.1}" text-anchor="end">{v:.1}</text>"#, MARGIN - 4.0);
    }
}

fn legend(out: &mut String, entries: &[(&str, &str)]) {
    for (i, (label, col)) in entries.iter().enumerate() {
        let x = WIDTH - MARGIN - 110.0;
        let y = MARGIN + 14.0 * i as f64;
        let _ = writeln!(out, r#"<rect x="{x}" y="{}" width="10" height="10" fill="{col}"/>"#, y - 9.0);
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{label}</text>"#, x + 14.0);
    }
}

/// Box plot per (experiment, method), with the truth drawn as a horizontal
/// line and dashed one-SE bands.
pub fn box_plot(table: &ResultTable, title: &str) -> String {
    let experiments = table.experiments();
    let methods: Vec<Method> = [Method::Additive, Method::Cp, Method::Cv, Method::Bootstrap]
        .into_iter()
        .filter(|m| table.rows.iter().any(|r| r.method == *m))
        .collect();
    let frame = Frame::new(table.rows.iter().flat_map(|r| [r.estimate, r.truth]));
    let mut out = String::new();
    header(&mut out, title, &frame);
    let group_w = (WIDTH - 2.0 * MARGIN) / experiments.len().max(1) as f64;
    let box_w = group_w / (methods.len() + 1) as f64;
    for (g, exp) in experiments.iter().enumerate() {
        let x0 = MARGIN + g as f64 * group_w;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{exp}</text>"#,
            x0 + group_w / 2.0,
            HEIGHT - MARGIN + 16.0
        );
        for (k, m) in methods.iter().enumerate() {
            let mut vals: Vec<f64> = table
                .rows
                .iter()
                .filter(|r| &r.experiment == exp && r.method == *m)
                .map(|r| r.estimate)
                .collect();
            if vals.is_empty() {
                continue;
            }
            vals.sort_by(f64::total_cmp);
            let (q1, q2, q3) = (quantile(&vals, 0.25), quantile(&vals, 0.5), quantile(&vals, 0.75));
            let (lo, hi) = (vals[0], vals[vals.len() - 1]);
            let cx = x0 + box_w * (k as f64 + 1.0);
            let half = box_w * 0.35;
            let c = color(*m);
            let _ = writeln!(
                out,
                r#"<line x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="{c}"/>"#,
                frame.y(lo),
                frame.y(hi)
            );
            let _ = writeln!(
                out,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{c}" fill-opacity="0.4" stroke="{c}"/>"#,
                cx - half,
                frame.y(q3),
                2.0 * half,
                (frame.y(q1) - frame.y(q3)).max(0.5)
            );
            let _ = writeln!(
                out,
                r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
                cx - half,
                frame.y(q2),
                cx + half,
                frame.y(q2)
            );
        }
        if let Some(t) = table.rows.iter().find(|r| &r.experiment == exp) {
            let y = frame.y(t.truth);
            let _ = writeln!(
                out,
                r#"<line x1="{x0:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="red"/>"#,
                x0 + group_w
            );
            for band in [t.truth - t.truth_se, t.truth + t.truth_se] {
                let yb = frame.y(band);
                let _ = writeln!(
                    out,
                    r#"<line x1="{x0:.1}" y1="{yb:.1}" x2="{:.1}" y2="{yb:.1}" stroke="black" stroke-dasharray="4,3"/>"#,
                    x0 + group_w
                );
            }
        }
    }
    let entries: Vec<(&str, &str)> = methods.iter().map(|m| (m.as_str(), color(*m))).collect();
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

/// A named curve: (x, mean, se) points.
pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64, f64)>,
}

/// Line plot with +-1 SE error bars.
pub fn line_plot(series: &[Series<'_>], title: &str, x_label: &str) -> String {
    let frame = Frame::new(
        series
            .iter()
            .flat_map(|s| s.points.iter().flat_map(|&(_, m, se)| [m - se, m + se])),
    );
    let xs = Frame::new(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let x_of = |v: f64| MARGIN + (v - xs.lo) / (xs.hi - xs.lo) * (WIDTH - 2.0 * MARGIN);
    let mut out = String::new();
    header(&mut out, title, &frame);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0
    );
    let mut entries = Vec::new();
    for (i, s) in series.iter().enumerate() {
        let c = PALETTE[i % PALETTE.len()];
        entries.push((s.name, c));
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, m, _)| format!("{:.1},{:.1}", x_of(x), frame.y(m)))
            .collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        for &(x, m, se) in &s.points {
            let px = x_of(x);
            let _ = writeln!(
                out,
                r#"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="{c}"/>"#,
                frame.y(m - se),
                frame.y(m + se)
            );
            let _ = writeln!(out, r#"<text x="{px:.1}" y="{}" text-anchor="middle">{x}</text>"#, HEIGHT - MARGIN + 14.0);
        }
    }
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}
