//! Standalone SVG 1.1 line plots and heat maps on a fixed canvas.
//!
//! Output depends only on the data: coordinates are written with a fixed
//! number of decimals and nothing is taken from the environment.

use std::fmt::Write;

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 640.0;

const LEFT: f64 = 90.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;

pub const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Stops of the heat-map colour scale (dark blue to yellow).
const COLOR_STOPS: [(f64, [u8; 3]); 5] =
    [(0.0, [68, 1, 84]), (0.25, [59, 82, 139]), (0.5, [33, 145, 140]), (0.75, [94, 201, 98]), (1.0, [253, 231, 37])];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: usize,
    pub dashed: bool,
}

pub struct Axes<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
}

#[derive(Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Tick positions at 1, 2 or 5 times a power of ten.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= target as f64).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn header(svg: &mut String, title: &str) {
    let _ = write!(
        svg,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"14\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.2}\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">{}</text>\n",
        LEFT + 0.5 * (WIDTH - LEFT - RIGHT),
        escape(title)
    );
}

fn axes(svg: &mut String, frame: Frame, axes: &Axes) {
    let (xa, xb) = (frame.px(frame.x0), frame.px(frame.x1));
    let (ya, yb) = (frame.py(frame.y0), frame.py(frame.y1));
    let _ = writeln!(
        svg,
        "<rect x=\"{xa:.2}\" y=\"{yb:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>",
        xb - xa,
        ya - yb
    );
    for x in ticks(frame.x0, frame.x1, 8) {
        let p = frame.px(x);
        let _ =
            writeln!(svg, "<line x1=\"{p:.2}\" y1=\"{ya:.2}\" x2=\"{p:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", ya + 6.0);
        let _ =
            writeln!(svg, "<text x=\"{p:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", ya + 22.0, tick_label(x));
    }
    for y in ticks(frame.y0, frame.y1, 6) {
        let p = frame.py(y);
        let _ =
            writeln!(svg, "<line x1=\"{:.2}\" y1=\"{p:.2}\" x2=\"{xa:.2}\" y2=\"{p:.2}\" stroke=\"black\"/>", xa - 6.0);
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            xa - 10.0,
            p + 5.0,
            tick_label(y)
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
        0.5 * (xa + xb),
        HEIGHT - 20.0,
        escape(axes.x_label)
    );
    let (cx, cy) = (25.0, 0.5 * (ya + yb));
    let _ = writeln!(
        svg,
        "<text x=\"{cx:.2}\" y=\"{cy:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 {cx:.2} {cy:.2})\">{}</text>",
        escape(axes.y_label)
    );
}

/// Line plot with one polyline per series and a legend on the right.
pub fn line_plot(series: &[Series], labels: &Axes) -> String {
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for p in series.iter().flat_map(|s| s.points.iter()) {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y1 = y1.max(p.1);
    }
    if !(x1 > x0) {
        x0 = 0.0;
        x1 = 1.0;
    }
    if !(y1 > 0.0) {
        y1 = 1.0;
    }
    let frame = Frame { x0, x1, y0: 0.0, y1: y1 * 1.05 };

    let mut svg = String::new();
    header(&mut svg, labels.title);
    axes(&mut svg, frame, labels);
    for s in series {
        let color = PALETTE[s.color % PALETTE.len()];
        let dash = if s.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let _ = write!(svg, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash} points=\"");
        for (k, &(x, y)) in s.points.iter().enumerate() {
            let sep = if k == 0 { "" } else { " " };
            let _ = write!(svg, "{sep}{:.2},{:.2}", frame.px(x), frame.py(y));
        }
        svg.push_str("\"/>\n");
    }
    let lx = WIDTH - RIGHT + 20.0;
    for (k, s) in series.iter().enumerate() {
        let y = TOP + 20.0 + 24.0 * k as f64;
        let color = PALETTE[s.color % PALETTE.len()];
        let dash = if s.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>",
            lx + 30.0
        );
        let _ = writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>", lx + 38.0, y + 5.0, escape(&s.label));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Maps a fraction in [0, 1] to an RGB colour on the heat-map scale.
pub fn color_scale(f: f64) -> [u8; 3] {
    let f = if f.is_finite() { f.clamp(0.0, 1.0) } else { 0.0 };
    let k = COLOR_STOPS.iter().position(|s| s.0 >= f).unwrap_or(COLOR_STOPS.len() - 1).max(1);
    let (fa, ca) = COLOR_STOPS[k - 1];
    let (fb, cb) = COLOR_STOPS[k];
    let w = (f - fa) / (fb - fa);
    let mix = |a: u8, b: u8| (a as f64 + w * (b as f64 - a as f64)).round() as u8;
    [mix(ca[0], cb[0]), mix(ca[1], cb[1]), mix(ca[2], cb[2])]
}

fn hex(c: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Heat map of `values[i][j]` over (xs[j], ys[i]), normalized to [0, max],
/// with a colour bar. Grids must be ascending.
pub fn heat_map(xs: &[f64], ys: &[f64], values: &[Vec<f64>], labels: &Axes, bar_label: &str) -> String {
    let edges = |v: &[f64]| -> Vec<f64> {
        match v.len() {
            0 => vec![0.0, 1.0],
            1 => vec![v[0] - 0.5, v[0] + 0.5],
            n => {
                let mut e = Vec::with_capacity(n + 1);
                e.push(v[0] - 0.5 * (v[1] - v[0]));
                e.extend(v.windows(2).map(|w| 0.5 * (w[0] + w[1])));
                e.push(v[n - 1] + 0.5 * (v[n - 1] - v[n - 2]));
                e
            }
        }
    };
    let (xe, ye) = (edges(xs), edges(ys));
    let frame = Frame { x0: xe[0], x1: xe[xe.len() - 1], y0: ye[0], y1: ye[ye.len() - 1] };
    let max = values.iter().flatten().copied().fold(0.0f64, f64::max);
    let scale = if max > 0.0 { max } else { 1.0 };

    let mut svg = String::new();
    header(&mut svg, labels.title);
    svg.push_str("<g shape-rendering=\"crispEdges\">\n");
    for (i, row) in values.iter().enumerate() {
        let (top, bottom) = (frame.py(ye[i + 1]), frame.py(ye[i]));
        for (j, &v) in row.iter().enumerate() {
            let (left, right) = (frame.px(xe[j]), frame.px(xe[j + 1]));
            let _ = writeln!(
                svg,
                "<rect x=\"{left:.2}\" y=\"{top:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                right - left,
                bottom - top,
                hex(color_scale(v / scale))
            );
        }
    }
    svg.push_str("</g>\n");
    axes(&mut svg, frame, labels);

    // colour bar
    let (bx, bw) = (WIDTH - RIGHT + 40.0, 24.0);
    let (btop, bbottom) = (TOP, HEIGHT - BOTTOM);
    let bands = 64;
    let band = (bbottom - btop) / bands as f64;
    for k in 0..bands {
        let f = (k as f64 + 0.5) / bands as f64;
        let y = bbottom - (k + 1) as f64 * band;
        let _ = writeln!(
            svg,
            "<rect x=\"{bx:.2}\" y=\"{y:.2}\" width=\"{bw:.2}\" height=\"{:.2}\" fill=\"{}\" stroke=\"none\"/>",
            band + 0.5,
            hex(color_scale(f))
        );
    }
    let _ = writeln!(
        svg,
        "<rect x=\"{bx:.2}\" y=\"{btop:.2}\" width=\"{bw:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>",
        bbottom - btop
    );
    for v in ticks(0.0, scale, 5) {
        let y = bbottom - v / scale * (bbottom - btop);
        let _ = writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>", bx + bw + 6.0, y + 5.0, tick_label(v));
    }
    let (cx, cy) = (WIDTH - 20.0, 0.5 * (btop + bbottom));
    let _ = writeln!(
        svg,
        "<text x=\"{cx:.2}\" y=\"{cy:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 {cx:.2} {cy:.2})\">{}</text>",
        escape(bar_label)
    );
    svg.push_str("</svg>\n");
    svg
}
