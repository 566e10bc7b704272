//! Minimal SVG line, bar and violin plots. The data behind every plot is also written as CSV.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Maps data values onto a pixel interval; a degenerate range is widened symmetrically.
struct Scale {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, px_lo: f64, px_hi: f64) -> Self {
        let (lo, hi) = if (hi - lo).abs() < 1e-12 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        };
        Scale { lo, hi, px_lo, px_hi }
    }

    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn axes(s: &mut String, x_label: &str, y_label: &str, y: &Scale) {
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN / 2.0, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for k in 0..=4 {
        let v = y.lo + (y.hi - y.lo) * k as f64 / 4.0;
        let py = y.map(v);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{:.3}</text>"#,
            x0 - 6.0,
            py + 4.0,
            v
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
}

/// Polyline of `(x, y)` points with markers.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let mut s = header(title);
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if points.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let x = Scale::new(min(&xs), max(&xs), MARGIN, WIDTH - MARGIN / 2.0);
    let y = Scale::new(min(&ys), max(&ys), HEIGHT - MARGIN, MARGIN);
    axes(&mut s, x_label, y_label, &y);
    let path: Vec<String> = points
        .iter()
        .map(|&(a, b)| format!("{:.1},{:.1}", x.map(a), y.map(b)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#,
        path.join(" ")
    );
    for &(a, b) in points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="steelblue"/>"#,
            x.map(a),
            y.map(b)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// One vertical bar per labelled value, on an axis that always includes zero.
pub fn bar_plot(title: &str, y_label: &str, bars: &[(String, f64)]) -> String {
    let mut s = header(title);
    if bars.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let lo = bars.iter().map(|b| b.1).fold(0.0, f64::min);
    let hi = bars.iter().map(|b| b.1).fold(0.0, f64::max);
    let y = Scale::new(lo, hi, HEIGHT - MARGIN, MARGIN);
    axes(&mut s, "", y_label, &y);
    let slot = (WIDTH - 1.5 * MARGIN) / bars.len() as f64;
    let zero = y.map(0.0);
    for (k, (name, v)) in bars.iter().enumerate() {
        let x = MARGIN + slot * k as f64 + 0.1 * slot;
        let top = y.map(*v).min(zero);
        let _ = writeln!(
            s,
            r#"<rect x="{x:.1}" y="{top:.1}" width="{:.1}" height="{:.1}" fill="steelblue"/>"#,
            0.8 * slot,
            (y.map(*v) - zero).abs()
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
            x + 0.4 * slot,
            HEIGHT - MARGIN + 14.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Gaussian kernel density on `grid` with Silverman's bandwidth.
fn density(values: &[f64], grid: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    let h = (1.06 * sd * n.powf(-0.2)).max(1e-9);
    grid.iter()
        .map(|g| values.iter().map(|v| (-0.5 * ((g - v) / h).powi(2)).exp()).sum::<f64>() / (n * h))
        .collect()
}

/// Side-by-side violins, one per named group.
pub fn violin_plot(title: &str, y_label: &str, groups: &[(String, Vec<f64>)]) -> String {
    let mut s = header(title);
    let all: Vec<f64> = groups.iter().flat_map(|g| g.1.iter().copied()).collect();
    if all.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let y = Scale::new(lo, hi, HEIGHT - MARGIN, MARGIN);
    axes(&mut s, "", y_label, &y);
    let slot = (WIDTH - 1.5 * MARGIN) / groups.len() as f64;
    let grid: Vec<f64> = (0..=60).map(|k| y.lo + (y.hi - y.lo) * k as f64 / 60.0).collect();
    let palette = ["#4c72b0", "#dd8452", "#55a868", "#c44e52"];
    for (g, (name, values)) in groups.iter().enumerate() {
        let cx = MARGIN + slot * (g as f64 + 0.5);
        let _ = writeln!(
            s,
            r#"<text x="{cx:.1}" y="{}" text-anchor="middle">{} (n={})</text>"#,
            HEIGHT - MARGIN + 18.0,
            escape(name),
            values.len()
        );
        if values.len() < 2 {
            continue;
        }
        let d = density(values, &grid);
        let peak = d.iter().copied().fold(0.0, f64::max).max(1e-12);
        let half = 0.4 * slot;
        let right: Vec<String> = grid
            .iter()
            .zip(&d)
            .map(|(v, dv)| format!("{:.1},{:.1}", cx + half * dv / peak, y.map(*v)))
            .collect();
        let left: Vec<String> = grid
            .iter()
            .zip(&d)
            .rev()
            .map(|(v, dv)| format!("{:.1},{:.1}", cx - half * dv / peak, y.map(*v)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{} {}" fill="{}" fill-opacity="0.6" stroke="black" stroke-width="0.5"/>"#,
            right.join(" "),
            left.join(" "),
            palette[g % palette.len()]
        );
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-width="2"/>"#,
            cx - half / 2.0,
            y.map(mean),
            cx + half / 2.0,
            y.map(mean)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_is_well_formed() {
        let svg = line_plot("Q <t>", "snapshot", "Q", &[(0.0, 0.4), (1.0, 0.4), (2.0, 0.5)]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("Q &lt;t&gt;"));
    }

    #[test]
    fn bar_plot_draws_every_bar() {
        let svg = bar_plot(
            "m",
            "value",
            &[("a".into(), 0.5), ("b".into(), -0.2), ("c".into(), 0.0)],
        );
        assert_eq!(svg.matches("<rect").count(), 4);
    }

    #[test]
    fn violin_handles_constant_and_tiny_groups() {
        let svg = violin_plot(
            "mb",
            "value",
            &[("a".into(), vec![1.0, 1.0, 1.0]), ("b".into(), vec![2.0])],
        );
        assert_eq!(svg.matches("<polygon").count(), 1);
    }
}
