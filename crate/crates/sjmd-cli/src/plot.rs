//! Static SVG rendering: one panel per component, extracted traces solid,
//! references dashed.

/// One trace within a panel.
pub struct Trace<'a> {
    pub label: &'a str,
    pub values: &'a [f64],
    pub dashed: bool,
}

pub struct Panel<'a> {
    pub title: String,
    pub traces: Vec<Trace<'a>>,
}

const WIDTH: f64 = 900.0;
const PANEL_HEIGHT: f64 = 150.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 15.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 10.0;

fn polyline(values: &[f64], lo: f64, hi: f64, y0: f64) -> String {
    let span = (hi - lo).max(1e-300);
    let inner_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let inner_h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let n = values.len().max(2);
    let mut points = String::new();
    for (i, &v) in values.iter().enumerate() {
        let x = MARGIN_LEFT + inner_w * i as f64 / (n - 1) as f64;
        let y = y0 + MARGIN_TOP + inner_h * (1.0 - (v - lo) / span);
        points.push_str(&format!("{x:.2},{y:.2} "));
    }
    points
}

/// Renders stacked panels into a standalone SVG document.
pub fn render_panels(panels: &[Panel]) -> String {
    let total_h = PANEL_HEIGHT * panels.len() as f64;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{total_h}\" \
         viewBox=\"0 0 {WIDTH} {total_h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for (p, panel) in panels.iter().enumerate() {
        let y0 = PANEL_HEIGHT * p as f64;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for t in &panel.traces {
            for &v in t.values {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !lo.is_finite() || !hi.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        svg.push_str(&format!(
            "<text x=\"{MARGIN_LEFT}\" y=\"{:.2}\" font-family=\"sans-serif\" \
             font-size=\"13\">{}</text>\n",
            y0 + 16.0,
            panel.title
        ));
        svg.push_str(&format!(
            "<text x=\"6\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"10\">{hi:.3}</text>\n\
             <text x=\"6\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"10\">{lo:.3}</text>\n",
            y0 + MARGIN_TOP + 8.0,
            y0 + PANEL_HEIGHT - MARGIN_BOTTOM
        ));
        svg.push_str(&format!(
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"#999\" stroke-width=\"0.5\"/>\n",
            y0 + PANEL_HEIGHT - MARGIN_BOTTOM,
            WIDTH - MARGIN_RIGHT,
            y0 + PANEL_HEIGHT - MARGIN_BOTTOM
        ));
        for t in &panel.traces {
            let style = if t.dashed {
                "stroke=\"black\" stroke-dasharray=\"5,4\""
            } else {
                "stroke=\"#1f77b4\""
            };
            svg.push_str(&format!(
                "<polyline fill=\"none\" {style} stroke-width=\"1\" points=\"{}\"/>\n",
                polyline(t.values, lo, hi, y0)
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}
