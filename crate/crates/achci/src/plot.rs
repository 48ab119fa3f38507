//! Minimal self-contained SVG output: scatter, histogram, log-log runtime
//! plot, and tour overlays. No external renderer.

use std::fmt::Write as _;

use crate::geometry::SeparatorSet;
use crate::heuristics::Tour;
use crate::tsplib::Instance;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

struct Frame {
    svg: String,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64, xlabel: &str, ylabel: &str, title: &str) -> Frame {
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>",
            WIDTH / 2.0,
            xml_escape(title)
        );
        let mut f = Frame { svg, x0, x1, y0, y1 };
        f.axes(xlabel, ylabel);
        f
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn axes(&mut self, xlabel: &str, ylabel: &str) {
        let l = MARGIN;
        let r = WIDTH - MARGIN;
        let t = MARGIN;
        let b = HEIGHT - MARGIN;
        let _ = writeln!(
            self.svg,
            "<rect x=\"{l}\" y=\"{t}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            r - l,
            b - t
        );
        for i in 0..=5 {
            let fx = self.x0 + (self.x1 - self.x0) * i as f64 / 5.0;
            let fy = self.y0 + (self.y1 - self.y0) * i as f64 / 5.0;
            let px = self.px(fx);
            let py = self.py(fy);
            let _ = writeln!(
                self.svg,
                "<line x1=\"{px}\" y1=\"{b}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>",
                b + 5.0
            );
            let _ = writeln!(
                self.svg,
                "<text x=\"{px}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
                b + 18.0,
                tick_label(fx)
            );
            let _ = writeln!(
                self.svg,
                "<line x1=\"{}\" y1=\"{py}\" x2=\"{l}\" y2=\"{py}\" stroke=\"black\"/>",
                l - 5.0
            );
            let _ = writeln!(
                self.svg,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
                l - 8.0,
                py + 4.0,
                tick_label(fy)
            );
        }
        let _ = writeln!(
            self.svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
            WIDTH / 2.0,
            HEIGHT - 14.0,
            xml_escape(xlabel)
        );
        let _ = writeln!(
            self.svg,
            "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 {})\">{}</text>",
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            xml_escape(ylabel)
        );
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, color: &str) {
        let px = self.px(x);
        let py = self.py(y);
        let _ = writeln!(
            self.svg,
            "<circle cx=\"{px}\" cy=\"{py}\" r=\"{r}\" fill=\"{color}\" fill-opacity=\"0.7\"/>"
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, color: &str, width: f64) {
        let _ = writeln!(
            self.svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"{width}\"/>",
            self.px(x1),
            self.py(y1),
            self.px(x2),
            self.py(y2)
        );
    }

    fn rect(&mut self, x: f64, w: f64, y: f64, color: &str) {
        let px = self.px(x);
        let pw = self.px(x + w) - px;
        let py = self.py(y);
        let base = self.py(self.y0);
        let _ = writeln!(
            self.svg,
            "<rect x=\"{px}\" y=\"{py}\" width=\"{pw}\" height=\"{}\" fill=\"{color}\" stroke=\"black\" stroke-width=\"0.5\"/>",
            base - py
        );
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1000.0 || v.abs() < 0.01 {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Scatter plot of (x, y) samples.
pub fn scatter_svg(points: &[(f64, f64)], xlabel: &str, ylabel: &str, title: &str) -> String {
    let (x0, x1) = span(points.iter().map(|p| p.0));
    let (y0, y1) = span(points.iter().map(|p| p.1));
    let mut f = Frame::new(x0, x1, y0, y1, xlabel, ylabel, title);
    for &(x, y) in points {
        f.circle(x, y, 3.0, "#1f6fb2");
    }
    f.finish()
}

/// Histogram with equal-width bins.
pub fn histogram_svg(values: &[f64], bins: usize, xlabel: &str, title: &str) -> String {
    let bins = bins.max(1);
    let (lo, hi) = span(values.iter().copied());
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let peak = counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let mut f = Frame::new(lo, hi, 0.0, peak * 1.05, xlabel, "count", title);
    for (b, &count) in counts.iter().enumerate() {
        if count > 0 {
            f.rect(lo + b as f64 * width, width, count as f64, "#76a966");
        }
    }
    f.finish()
}

/// Log-log scatter of (n, seconds) with the fitted power-law line drawn
/// through it.
pub fn loglog_runtime_svg(samples: &[(f64, f64)], exponent: f64, intercept: f64, title: &str) -> String {
    let logs: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(n, t)| n > 0.0 && t > 0.0)
        .map(|&(n, t)| (n.log10(), t.log10()))
        .collect();
    let (x0, x1) = span(logs.iter().map(|p| p.0));
    let (y0, y1) = span(logs.iter().map(|p| p.1));
    let mut f = Frame::new(x0, x1, y0, y1, "log10 n", "log10 seconds", title);
    // Fit computed on natural logs: log t = intercept + exponent * log n.
    let line_y = |lx: f64| {
        let ln_n = lx * std::f64::consts::LN_10;
        (intercept + exponent * ln_n) / std::f64::consts::LN_10
    };
    f.line(x0, line_y(x0), x1, line_y(x1), "#cc5555", 1.5);
    for &(lx, ly) in &logs {
        f.circle(lx, ly, 3.5, "#1f6fb2");
    }
    f.finish()
}

/// Draw an instance, its separators, and a tour over it.
pub fn tour_svg(inst: &Instance, seps: &SeparatorSet, tour: Option<&Tour>) -> String {
    let (x0, x1) = span(
        inst.coords
            .iter()
            .map(|p| p.x)
            .chain(seps.segments.iter().flat_map(|s| [s.a.x, s.b.x])),
    );
    let (y0, y1) = span(
        inst.coords
            .iter()
            .map(|p| p.y)
            .chain(seps.segments.iter().flat_map(|s| [s.a.y, s.b.y])),
    );
    let title = format!("{} (k = {})", inst.name, seps.k);
    let mut f = Frame::new(x0, x1, y0, y1, "x", "y", &title);
    if let Some(t) = tour {
        let n = t.order.len();
        for r in 0..n {
            let a = inst.coords[t.order[r]];
            let b = inst.coords[t.order[(r + 1) % n]];
            f.line(a.x, a.y, b.x, b.y, "#999999", 1.0);
        }
    }
    for s in &seps.segments {
        f.line(s.a.x, s.a.y, s.b.x, s.b.y, "#cc2222", 2.5);
    }
    for p in &inst.coords {
        f.circle(p.x, p.y, 2.5, "#1f6fb2");
    }
    f.finish()
}
