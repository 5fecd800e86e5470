//! Tiny hand-rolled SVG line plots; enough for Bode curves and windowed
//! RMSE series without pulling in a plotting stack.

use std::fs;
use std::path::Path;

use crate::error::Result;

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 46.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

pub fn write_plot(path: &Path, panels: &[Panel]) -> Result<()> {
    let total_height = HEIGHT * panels.len() as f64;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{total_height}\" \
         viewBox=\"0 0 {WIDTH} {total_height}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for (i, panel) in panels.iter().enumerate() {
        render_panel(&mut svg, panel, i as f64 * HEIGHT);
    }
    svg.push_str("</svg>\n");
    fs::write(path, svg)?;
    Ok(())
}

fn render_panel(svg: &mut String, panel: &Panel, y_off: f64) {
    let map_x = |x: f64| if panel.log_x { x.log10() } else { x };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in &panel.series {
        for &(x, y) in &s.points {
            let x = map_x(x);
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() || x_max <= x_min {
        x_max = x_min + 1.0;
    }
    if !y_min.is_finite() {
        y_min = 0.0;
        y_max = 1.0;
    }
    if y_max - y_min < 1e-12 {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    let (y_min, y_max) = (y_min - pad, y_max + pad);

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let px = |x: f64| MARGIN_L + (map_x(x) - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| y_off + MARGIN_T + (y_max - y) / (y_max - y_min) * plot_h;

    let (left, right, top, bottom) = (
        MARGIN_L,
        WIDTH - MARGIN_R,
        y_off + MARGIN_T,
        y_off + HEIGHT - MARGIN_B,
    );
    svg.push_str(&format!(
        "<rect x=\"{left}\" y=\"{top}\" width=\"{}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#444\"/>\n",
        plot_w
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        (left + right) / 2.0,
        top - 12.0,
        escape(&panel.title)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        (left + right) / 2.0,
        bottom + 34.0,
        escape(&panel.x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\">{}</text>\n",
        left - 50.0,
        (top + bottom) / 2.0,
        left - 50.0,
        (top + bottom) / 2.0,
        escape(&panel.y_label)
    ));

    // min/mid/max tick labels on both axes
    for (frac, value) in [(0.0, y_max), (0.5, (y_min + y_max) / 2.0), (1.0, y_min)] {
        let y = top + frac * plot_h;
        svg.push_str(&format!(
            "<line x1=\"{left}\" y1=\"{y}\" x2=\"{right}\" y2=\"{y}\" stroke=\"#ddd\"/>\n\
             <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            left - 6.0,
            y + 4.0,
            format_tick(value)
        ));
    }
    for (frac, value) in [(0.0, x_min), (0.5, (x_min + x_max) / 2.0), (1.0, x_max)] {
        let x = left + frac * plot_w;
        let shown = if panel.log_x {
            10f64.powf(value)
        } else {
            value
        };
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            bottom + 16.0,
            format_tick(shown)
        ));
    }

    for (i, s) in panel.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| map_x(*x).is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            points.join(" ")
        ));
        let ly = top + 16.0 + 16.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
             <text x=\"{}\" y=\"{}\">{}</text>\n",
            left + 10.0,
            left + 34.0,
            left + 40.0,
            ly + 4.0,
            escape(&s.label)
        ));
    }
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
