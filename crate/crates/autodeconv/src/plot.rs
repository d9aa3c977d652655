//! Self-contained SVG plots (inline polylines, no external assets).
//! Plotting is best effort and never gates solver exit codes.

use std::fmt::Write as _;

use autodeconv_core::grid::GridFunction;

use crate::experiment::{Method, RateStudyResult};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 55.0;

fn method_color(method: Method) -> &'static str {
    match method {
        Method::Pc => "#d62728",         // red
        Method::PcSmoothed => "#1f77b4", // blue
        Method::Cubic => "#000000",      // black
    }
}

struct Axes {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Axes {
    fn from_ranges(xs: impl Iterator<Item = f64>, ys: impl Iterator<Item = f64>) -> Axes {
        let mut a = Axes {
            x_min: f64::INFINITY,
            x_max: f64::NEG_INFINITY,
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
        };
        for x in xs {
            a.x_min = a.x_min.min(x);
            a.x_max = a.x_max.max(x);
        }
        for y in ys {
            a.y_min = a.y_min.min(y);
            a.y_max = a.y_max.max(y);
        }
        let pad = |lo: &mut f64, hi: &mut f64| {
            let span = (*hi - *lo).max(1e-12);
            *lo -= 0.05 * span;
            *hi += 0.05 * span;
        };
        pad(&mut a.x_min, &mut a.x_max);
        pad(&mut a.y_min, &mut a.y_max);
        a
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT
            - MARGIN_B
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn svg_header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn draw_frame(out: &mut String, axes: &Axes, x_label: &str, y_label: &str) {
    let (x0, x1) = (MARGIN_L, WIDTH - MARGIN_R);
    let (y0, y1) = (HEIGHT - MARGIN_B, MARGIN_T);
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    for i in 0..=4 {
        let fx = axes.x_min + (axes.x_max - axes.x_min) * i as f64 / 4.0;
        let px = axes.sx(fx);
        let _ = writeln!(
            out,
            r#"<line x1="{px}" y1="{y0}" x2="{px}" y2="{}" stroke="black"/><text x="{px}" y="{}" font-size="12" text-anchor="middle">{fx:.2}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
        let fy = axes.y_min + (axes.y_max - axes.y_min) * i as f64 / 4.0;
        let py = axes.sy(fy);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/><text x="{}" y="{}" font-size="12" text-anchor="end">{fy:.2}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{x_label}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" font-size="14" text-anchor="middle" transform="rotate(-90 16 {})">{y_label}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn polyline(out: &mut String, axes: &Axes, points: &[(f64, f64)], color: &str) {
    let mut path = String::new();
    for &(x, y) in points {
        let _ = write!(path, "{:.2},{:.2} ", axes.sx(x), axes.sy(y));
    }
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>"#
    );
}

/// Log-log convergence plot: −ln(mean error) against −ln(δ), one polyline
/// per method.
pub fn rate_svg(result: &RateStudyResult) -> String {
    let methods: Vec<Method> = result.fitted_slopes.keys().copied().collect();
    let mut series: Vec<(Method, Vec<(f64, f64)>)> = Vec::new();
    for &method in &methods {
        let pts: Vec<(f64, f64)> = result
            .mean_errors(method)
            .into_iter()
            .map(|(d, e)| (-d.ln(), -e.ln()))
            .collect();
        series.push((method, pts));
    }
    let axes = Axes::from_ranges(
        series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.0)),
        series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.1)),
    );
    let mut out = String::new();
    svg_header(&mut out);
    draw_frame(&mut out, &axes, "-ln(delta)", "-ln(error)");
    for (i, (method, pts)) in series.iter().enumerate() {
        polyline(&mut out, &axes, pts, method_color(*method));
        let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="1.5"/><text x="{}" y="{}" font-size="12">{} (slope {:.3})</text>"#,
            MARGIN_L + 12.0,
            MARGIN_L + 40.0,
            method_color(*method),
            MARGIN_L + 46.0,
            ly + 4.0,
            method.label(),
            result.fitted_slopes[method]
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Overlay of the exact solution and a reconstruction on [0,1].
pub fn overlay_svg(x0: &GridFunction, reconstruction: &GridFunction) -> String {
    let thin = |g: &GridFunction| -> Vec<(f64, f64)> {
        let n = g.grid().n_nodes();
        let step = (n / 800).max(1);
        let mut pts: Vec<(f64, f64)> = g
            .grid()
            .nodes()
            .zip(g.values())
            .step_by(step)
            .map(|(t, &v)| (t, v))
            .collect();
        let last = (g.grid().node(n - 1), g.value(n - 1));
        if pts.last() != Some(&last) {
            pts.push(last);
        }
        pts
    };
    let a = thin(x0);
    let b = thin(reconstruction);
    let axes = Axes::from_ranges(
        a.iter().chain(&b).map(|p| p.0),
        a.iter().chain(&b).map(|p| p.1),
    );
    let mut out = String::new();
    svg_header(&mut out);
    draw_frame(&mut out, &axes, "t", "x(t)");
    polyline(&mut out, &axes, &a, "#000000");
    polyline(&mut out, &axes, &b, "#d62728");
    let mut legend = |row: f64, color: &str, label: &str| {
        let y = MARGIN_T + 16.0 + 18.0 * row;
        let _ = writeln!(
            out,
            r#"<line x1="{0}" y1="{y}" x2="{1}" y2="{y}" stroke="{color}" stroke-width="1.5"/><text x="{2}" y="{3}" font-size="12">{label}</text>"#,
            MARGIN_L + 12.0,
            MARGIN_L + 40.0,
            MARGIN_L + 46.0,
            y + 4.0
        );
    };
    legend(0.0, "#000000", "exact");
    legend(1.0, "#d62728", "reconstruction");
    out.push_str("</svg>\n");
    out
}
