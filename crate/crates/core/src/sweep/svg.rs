//! Minimal two-panel SVG line plot: ratio on a log axis above,
//! concurrence below.

use std::fmt::Write;

use super::runner::SweepRow;

const WIDTH: f64 = 720.0;
const PANEL_H: f64 = 260.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 30.0;
const GAP: f64 = 60.0;

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            hi = lo + 1.0;
        }
        Self { lo, hi, log }
    }

    // Position in [0, 1], or None for points a log axis cannot show.
    fn frac(&self, v: f64) -> Option<f64> {
        let v = if self.log {
            if v > 0.0 {
                v.log10()
            } else {
                return None;
            }
        } else {
            v
        };
        Some((v - self.lo) / (self.hi - self.lo))
    }

    fn label(&self, f: f64) -> String {
        let v = self.lo + f * (self.hi - self.lo);
        if self.log {
            format!("1e{v:.1}")
        } else {
            format!("{v:.3}")
        }
    }
}

fn panel(out: &mut String, top: f64, title: &str, xs: &[f64], ys: &[f64], x: &Axis, y: &Axis, x_label: &str) {
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN_L}" y="{top}" width="{plot_w}" height="{PANEL_H}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{title}</text>"#,
        MARGIN_L + plot_w / 2.0,
        top - 8.0
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let py = top + PANEL_H * (1.0 - f);
        let px = MARGIN_L + plot_w * f;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{py:.1}" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN_L - 6.0,
            y.label(f)
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.1}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
            top + PANEL_H + 16.0,
            x.label(f)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{x_label}</text>"#,
        MARGIN_L + plot_w / 2.0,
        top + PANEL_H + 34.0
    );
    let mut pts = String::new();
    for (&xv, &yv) in xs.iter().zip(ys) {
        if let (Some(fx), Some(fy)) = (x.frac(xv), y.frac(yv)) {
            let _ = write!(pts, "{:.2},{:.2} ", MARGIN_L + plot_w * fx, top + PANEL_H * (1.0 - fy));
        }
    }
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        pts.trim_end()
    );
}

/// Renders the rows; `log_x` puts the sweep axis on a log scale.
pub fn render_svg(rows: &[SweepRow], x_label: &str, log_x: bool) -> String {
    let xs: Vec<f64> = rows.iter().map(|r| r.sweep_value).collect();
    let ratio: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let conc: Vec<f64> = rows.iter().map(|r| r.concurrence).collect();
    let x = Axis::fit(xs.iter().copied(), log_x);
    let y_ratio = Axis::fit(ratio.iter().copied(), true);
    let y_conc = Axis::fit(conc.iter().copied().chain([0.0]), false);
    let height = MARGIN_T + 2.0 * PANEL_H + GAP + 50.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    panel(
        &mut out,
        MARGIN_T,
        "abs/unruh ratio (log)",
        &xs,
        &ratio,
        &x,
        &y_ratio,
        x_label,
    );
    panel(
        &mut out,
        MARGIN_T + PANEL_H + GAP,
        "concurrence",
        &xs,
        &conc,
        &x,
        &y_conc,
        x_label,
    );
    out.push_str("</svg>\n");
    out
}
