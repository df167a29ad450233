//! Crossing dumps and SVG pictures of the vertical projection.

use std::fmt::Write as _;

use cocycle_core::diagram::{compute_crossings, Crossing};
use cocycle_core::{LongKnot, ToleranceSet};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingDump {
    pub t_lo: f64,
    pub t_hi: f64,
    pub over_is_lo: bool,
    pub sign: i8,
    pub p: [f64; 2],
}

impl From<&Crossing> for CrossingDump {
    fn from(c: &Crossing) -> Self {
        Self { t_lo: c.lo, t_hi: c.hi, over_is_lo: c.lo_above, sign: c.sign, p: [c.point.x, c.point.y] }
    }
}

pub fn dump_crossings(k: &LongKnot, tol: &ToleranceSet) -> Vec<CrossingDump> {
    compute_crossings(k, tol).iter().map(CrossingDump::from).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct SvgStyle {
    /// Picture width in pixels; the height follows the aspect ratio.
    pub width: f64,
    /// Curve samples per unit of parameter.
    pub density: f64,
    /// Half-length of the break left in the under strand, as a fraction of
    /// the picture's larger side.
    pub gap: f64,
    /// Length of tail drawn on each side of the support.
    pub tail: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self { width: 480.0, density: 400.0, gap: 0.012, tail: 1.0 }
    }
}

/// The projection of `k` with a break in the lower strand at each crossing.
pub fn render_svg(k: &LongKnot, tol: &ToleranceSet, style: &SvgStyle) -> String {
    let (a, b) = k.support();
    let (a, b) = (a - style.tail, b + style.tail);
    let n = ((b - a) * style.density).ceil().max(2.0) as usize;
    let ts: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let pts: Vec<[f64; 2]> = ts
        .iter()
        .map(|&t| {
            let p = k.eval(t);
            [p.x, p.y]
        })
        .collect();

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let side = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let pad = 0.05 * side;
    let (w, h) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
    let px = style.width / w;
    let height = h * px;
    let map = |p: [f64; 2]| ((p[0] - lo[0] + pad) * px, (hi[1] + pad - p[1]) * px);

    let gap = style.gap * side;
    // parameter windows around the lower point of each crossing
    let unders: Vec<(f64, f64)> = compute_crossings(k, tol)
        .iter()
        .map(|c| {
            let d = k.deriv(c.under());
            let speed = d.x.hypot(d.y).max(1e-12);
            (c.under(), gap / speed)
        })
        .collect();
    let hidden = |t: f64| unders.iter().any(|&(u, dt)| (t - u).abs() < dt);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.2} {:.2}">"#,
        style.width, height, style.width, height
    );
    let _ = writeln!(out, r#"<title>{}</title>"#, escape(k.name()));
    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="2" stroke-linecap="round">"#);
    let mut run: Vec<(f64, f64)> = Vec::new();
    let flush = |run: &mut Vec<(f64, f64)>, out: &mut String| {
        if run.len() > 1 {
            let mut d = String::new();
            for (j, (x, y)) in run.iter().enumerate() {
                let _ = write!(d, "{}{:.2},{:.2}", if j == 0 { "M" } else { " L" }, x, y);
            }
            let _ = writeln!(out, r#"<path d="{d}"/>"#);
        }
        run.clear();
    };
    for (&t, &p) in ts.iter().zip(&pts) {
        if hidden(t) {
            flush(&mut run, &mut out);
        } else {
            run.push(map(p));
        }
    }
    flush(&mut run, &mut out);
    out.push_str("</g>\n</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
