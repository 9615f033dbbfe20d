//! Static SVG rendering of spectral measures: a density curve over the cut
//! plus stems for atoms, labeled with their weights. Output is plain SVG
//! markup with fixed-precision coordinates, so identical inputs produce
//! byte-identical files.

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, t: f64) -> f64 {
        MARGIN_LEFT + (t - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        let clamped = v.clamp(0.0, self.y_max);
        HEIGHT - MARGIN_BOTTOM - clamped / self.y_max * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect()
}

/// Renders a density curve (pairs `(t, value)`) and point masses (pairs
/// `(location, weight)`) into a standalone 800×500 SVG document.
pub fn density_svg(title: &str, curve: &[(f64, f64)], atoms: &[(f64, f64)]) -> String {
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_max: f64 = 0.0;
    for &(t, v) in curve {
        x_min = x_min.min(t);
        x_max = x_max.max(t);
        y_max = y_max.max(v);
    }
    for &(t, w) in atoms {
        x_min = x_min.min(t);
        x_max = x_max.max(t);
        y_max = y_max.max(w);
    }
    if !x_min.is_finite() {
        x_min = -1.0;
        x_max = 1.0;
    } else if x_min == x_max {
        x_min -= 1.0;
        x_max = x_min + 2.0;
    }
    if y_max <= 0.0 {
        y_max = 1.0;
    }
    let pad = 0.05 * (x_max - x_min);
    let frame = Frame {
        x_min: x_min - pad,
        x_max: x_max + pad,
        y_max: y_max * 1.1,
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"28\" font-family=\"sans-serif\" font-size=\"17\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    ));

    let x_axis_y = HEIGHT - MARGIN_BOTTOM;
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT:.1}\" y1=\"{x_axis_y:.1}\" x2=\"{:.1}\" y2=\"{x_axis_y:.1}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
        WIDTH - MARGIN_RIGHT
    ));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT:.1}\" y1=\"{MARGIN_TOP:.1}\" x2=\"{MARGIN_LEFT:.1}\" y2=\"{x_axis_y:.1}\" stroke=\"#333333\" stroke-width=\"1\"/>\n"
    ));
    for t in ticks(frame.x_min, frame.x_max, 8) {
        let x = frame.x(t);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{x_axis_y:.1}\" x2=\"{x:.2}\" y2=\"{:.1}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
            x_axis_y + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{t:.3}</text>\n",
            x_axis_y + 20.0
        ));
    }
    for v in ticks(0.0, frame.y_max, 5) {
        let y = frame.y(v);
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT:.1}\" y2=\"{y:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
            MARGIN_LEFT - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{v:.3}</text>\n",
            MARGIN_LEFT - 9.0,
            y + 4.0
        ));
    }

    if curve.len() > 1 {
        let mut points = String::new();
        for &(t, v) in curve {
            if !points.is_empty() {
                points.push(' ');
            }
            points.push_str(&format!("{:.2},{:.2}", frame.x(t), frame.y(v)));
        }
        svg.push_str(&format!(
            "<polyline points=\"{points}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n"
        ));
    }

    for &(t, w) in atoms {
        let x = frame.x(t);
        let y = frame.y(w);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{x_axis_y:.1}\" x2=\"{x:.2}\" y2=\"{y:.2}\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"4 3\"/>\n"
        ));
        svg.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"#d62728\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" fill=\"#d62728\">{w:.4}</text>\n",
            y - 10.0
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
