//! Minimal self-contained SVG line/step plots for the emitted artifacts.
//! CSVs stay the canonical outputs; these plots exist so results can be
//! eyeballed without any external plotting tool.

/// One curve on a plot.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    /// (x, y) points in drawing order (sorted by x for step curves).
    pub points: Vec<(f64, f64)>,
    /// Draw as a right-continuous staircase instead of straight segments.
    pub step: bool,
}

/// A simple 2-D line plot with axes, ticks, and a legend.
#[derive(Debug, Clone)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Round a raw interval up to a 1/2/5 x 10^k "nice" tick step.
fn nice_step(raw: f64) -> f64 {
    if raw <= 0.0 || !raw.is_finite() {
        return 1.0;
    }
    let magnitude = 10f64.powf(raw.log10().floor());
    let residual = raw / magnitude;
    let factor = if residual <= 1.0 {
        1.0
    } else if residual <= 2.0 {
        2.0
    } else if residual <= 5.0 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step((hi - lo) / 5.0);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + step * 1e-9 {
        // Snap tiny float debris (e.g. -1.2e-17) to zero for clean labels.
        out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if !(1e-3..1e6).contains(&a) {
        format!("{v:.1e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round())
    } else {
        format!("{v:.2}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl LinePlot {
    /// Render the plot as a standalone SVG document.
    pub fn render(&self) -> String {
        let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.series {
            for &(x, y) in &s.points {
                x_lo = x_lo.min(x);
                x_hi = x_hi.max(x);
                y_lo = y_lo.min(y);
                y_hi = y_hi.max(y);
            }
        }
        if !x_lo.is_finite() {
            (x_lo, x_hi, y_lo, y_hi) = (0.0, 1.0, 0.0, 1.0);
        }
        if x_hi == x_lo {
            x_hi = x_lo + 1.0;
        }
        if y_hi == y_lo {
            y_hi = y_lo + 1.0;
        }
        // A little headroom so curves do not sit on the frame.
        let y_pad = (y_hi - y_lo) * 0.05;
        y_lo -= y_pad;
        y_hi += y_pad;

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let px = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
        let py = |y: f64| MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
             font-family=\"sans-serif\" font-size=\"13\">\n"
        ));
        svg.push_str(&format!(
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-size=\"17\">{}</text>\n",
            WIDTH / 2.0,
            xml_escape(&self.title)
        ));

        // Frame.
        svg.push_str(&format!(
            "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
             fill=\"none\" stroke=\"#333\"/>\n"
        ));

        for t in ticks(x_lo, x_hi) {
            let x = px(t);
            svg.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"#333\"/>\n",
                MARGIN_TOP + plot_h,
                MARGIN_TOP + plot_h + 6.0
            ));
            svg.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{MARGIN_TOP}\" x2=\"{x:.2}\" y2=\"{}\" \
                 stroke=\"#ddd\"/>\n",
                MARGIN_TOP + plot_h
            ));
            svg.push_str(&format!(
                "<text x=\"{x:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                MARGIN_TOP + plot_h + 22.0,
                fmt_tick(t)
            ));
        }
        for t in ticks(y_lo, y_hi) {
            let y = py(t);
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{y:.2}\" \
                 stroke=\"#333\"/>\n",
                MARGIN_LEFT - 6.0
            ));
            svg.push_str(&format!(
                "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.2}\" x2=\"{}\" y2=\"{y:.2}\" \
                 stroke=\"#ddd\"/>\n",
                MARGIN_LEFT + plot_w
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
                MARGIN_LEFT - 10.0,
                y + 4.0,
                fmt_tick(t)
            ));
        }

        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 18.0,
            xml_escape(&self.x_label)
        ));
        svg.push_str(&format!(
            "<text x=\"22\" y=\"{}\" text-anchor=\"middle\" \
             transform=\"rotate(-90 22 {})\">{}</text>\n",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            xml_escape(&self.y_label)
        ));

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let mut coords = String::new();
            let mut prev: Option<(f64, f64)> = None;
            for &(x, y) in &series.points {
                if series.step {
                    if let Some((_, py_prev)) = prev {
                        coords.push_str(&format!("{:.2},{:.2} ", px(x), py(py_prev)));
                    }
                }
                coords.push_str(&format!("{:.2},{:.2} ", px(x), py(y)));
                prev = Some((x, y));
            }
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" \
                 points=\"{}\"/>\n",
                coords.trim_end()
            ));
        }

        // Legend in the top-right corner of the plot area.
        for (i, series) in self.series.iter().enumerate() {
            let y = MARGIN_TOP + 16.0 + i as f64 * 18.0;
            let x = MARGIN_LEFT + plot_w - 150.0;
            let color = PALETTE[i % PALETTE.len()];
            svg.push_str(&format!(
                "<line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" \
                 stroke-width=\"2\"/>\n",
                x + 26.0
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\">{}</text>\n",
                x + 32.0,
                y + 4.0,
                xml_escape(&series.label)
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}
