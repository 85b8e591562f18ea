//! Minimal self-contained SVG line charts: fixed [0, 1] y-axis, evenly
//! spaced categorical x positions (one per K), a polyline plus point
//! markers per series, and a legend. No external resources.

use std::fmt::Write;

pub struct Series<'a> {
    pub name: &'a str,
    /// (k, value) points; ks absent from the axis are skipped.
    pub points: &'a [(usize, f64)],
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 48.0;
const COLORS: [&str; 4] = ["#4878a8", "#e07b39", "#4a9d6b", "#c84b58"];

fn x_at(idx: usize, n: usize) -> f64 {
    let plot_w = WIDTH - LEFT - RIGHT;
    if n <= 1 {
        return LEFT + plot_w / 2.0;
    }
    LEFT + plot_w * idx as f64 / (n - 1) as f64
}

fn y_at(v: f64) -> f64 {
    let plot_h = HEIGHT - TOP - BOTTOM;
    TOP + plot_h * (1.0 - v.clamp(0.0, 1.0))
}

pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    ks: &[usize],
    series: &[Series],
) -> String {
    let n = ks.len();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        out,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        escape(title)
    );

    // Gridlines and y tick labels every 0.1.
    for t in 0..=10 {
        let v = t as f64 / 10.0;
        let y = y_at(v);
        let _ = writeln!(
            out,
            "<line x1=\"{LEFT}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#dddddd\"/>",
            WIDTH - RIGHT
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{v:.1}</text>",
            LEFT - 8.0,
            y + 4.0
        );
    }
    // X tick labels, one per K.
    for (i, k) in ks.iter().enumerate() {
        let x = x_at(i, n);
        let _ = writeln!(
            out,
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{k}</text>",
            HEIGHT - BOTTOM + 18.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        HEIGHT - 8.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>",
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0,
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0,
        escape(y_label)
    );

    for (s, series) in series.iter().enumerate() {
        let color = COLORS[s % COLORS.len()];
        let coords: Vec<(f64, f64)> = series
            .points
            .iter()
            .filter_map(|&(k, v)| {
                ks.iter()
                    .position(|&tick| tick == k)
                    .map(|i| (x_at(i, n), y_at(v)))
            })
            .collect();
        if coords.len() > 1 {
            let pts: Vec<String> = coords
                .iter()
                .map(|(x, y)| format!("{x:.1},{y:.1}"))
                .collect();
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
                pts.join(" ")
            );
        }
        for (x, y) in &coords {
            let _ = writeln!(
                out,
                "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"{color}\"/>"
            );
        }
        let ly = TOP + 16.0 * s as f64;
        let lx = WIDTH - RIGHT + 16.0;
        let _ = writeln!(
            out,
            "<line x1=\"{lx:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            ly - 4.0,
            lx + 20.0,
            ly - 4.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{ly:.1}\">{}</text>",
            lx + 26.0,
            escape(series.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
