//! Named long knots.
//!
//! Prime knots are built as long closures of braids: the strands run left
//! to right through the braid, strands that leave on lower positions return
//! leftward along nested half-circles below the braid, and the closure arc
//! of the top strand is cut open into the two tails. Heights only differ
//! from zero near crossings, where the over strand is lifted and the under
//! strand lowered.
//!
//! Everything is designed in axis coordinates `(X, V, z)`, with `X` the
//! arclength along the tail line and `V` the horizontal offset to its
//! left, then sampled by arclength into spline control points. A small
//! smooth height wobble keeps every side view of the knot generic.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::curve::{LongKnot, SplinePiece};
use crate::error::{Error, Result};
use crate::math::{cos, sin, sqrt, AxisCoords, Vec3, PI, SQRT_2};

/// Names accepted by [`make_catalog_knot`], besides `a#b` compositions.
pub const NAMES: &[&str] = &["unknot", "trefoil", "trefoil-mirror", "figure-eight", "kink+", "kink-"];

const STRAND_GAP: f64 = 1.0;
const TRANSITION: f64 = 0.5;
const LIFT: f64 = 0.3;
const CROSSING_SPACING: f64 = 2.0;
const MARGIN: f64 = 0.6;
const SAMPLE_STEP: f64 = 0.05;
const WOBBLE: f64 = 0.06;

/// Height added along the knot so that no side view is degenerate; `r` is
/// the arclength fraction. Vanishes to second order at both ends.
fn wobble(r: f64) -> f64 {
    let env = sin(PI * r);
    WOBBLE * env * env * (sin(2.0 * PI * 2.3 * r + 0.4) + 0.6 * sin(2.0 * PI * 5.1 * r + 1.3))
}

/// A catalog knot by name. `a#b#c` composes left to right.
pub fn make_catalog_knot(name: &str) -> Result<LongKnot> {
    if name.contains('#') {
        let parts = name
            .split('#')
            .map(|p| make_catalog_knot(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        return Ok(LongKnot::concat_all(&parts).with_name(name));
    }
    let k = match name {
        "unknot" => LongKnot::unknot(1.0),
        "trefoil" => braid_closure("trefoil", 2, &[1, 1, 1])?,
        "trefoil-mirror" => braid_closure("trefoil-mirror", 2, &[-1, -1, -1])?,
        "figure-eight" => braid_closure("figure-eight", 3, &[1, -2, 1, -2])?,
        "kink+" => kink("kink+", 1.0)?,
        "kink-" => kink("kink-", -1.0)?,
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    Ok(k)
}

/// Long closure of the braid word on `strands` strands. Generator `±i`
/// exchanges positions `i` and `i + 1`; for `+i` the strand moving from
/// position `i` to `i + 1` passes over, which is a positive crossing.
///
/// The permutation of the word must be a single cycle.
pub fn braid_closure(name: &str, strands: usize, word: &[i32]) -> Result<LongKnot> {
    if strands < 1 || word.iter().any(|g| g.unsigned_abs() as usize >= strands || *g == 0) {
        return Err(Error::InvalidKnot("braid generator out of range".into()));
    }
    let n = word.len() as f64;
    let xs: Vec<f64> = (0..word.len())
        .map(|k| (k as f64 - 0.5 * (n - 1.0)) * CROSSING_SPACING)
        .collect();
    let x_l = xs.first().copied().unwrap_or(0.0) - TRANSITION - 0.7;
    let x_r = xs.last().copied().unwrap_or(0.0) + TRANSITION + 0.7;
    let radius = |pos: usize| (strands - pos) as f64 * STRAND_GAP + 0.5 * STRAND_GAP;
    let r_max = if strands > 1 { radius(2) } else { 0.0 };
    let x_min = x_l - r_max - MARGIN;
    let x_max = x_r + r_max + MARGIN;
    let center_v = -(strands as f64 - 1.0) * STRAND_GAP - 0.5 * STRAND_GAP;
    let level = |pos: usize| -((pos - 1) as f64) * STRAND_GAP;

    let mut path: Vec<[f64; 3]> = Vec::new();
    push_line(&mut path, [x_min, 0.0, 0.0], [x_l, 0.0, 0.0]);
    let mut pos = 1usize;
    let mut passes = 0;
    loop {
        passes += 1;
        if passes > strands {
            return Err(Error::InvalidKnot("braid closure has several components".into()));
        }
        pos = push_pass(&mut path, pos, word, &xs, x_l, x_r, &level);
        if pos == 1 {
            break;
        }
        let r = radius(pos);
        let steps = arc_steps(r);
        for i in 1..=steps {
            let phi = PI / 2.0 - PI * i as f64 / steps as f64;
            path.push([x_r + r * cos(phi), center_v + r * sin(phi), 0.0]);
        }
        push_line(&mut path, [x_r, center_v - r, 0.0], [x_l, center_v - r, 0.0]);
        for i in 1..=steps {
            let phi = 1.5 * PI - PI * i as f64 / steps as f64;
            path.push([x_l + r * cos(phi), center_v + r * sin(phi), 0.0]);
        }
    }
    if passes != strands {
        return Err(Error::InvalidKnot("braid closure has several components".into()));
    }
    push_line(&mut path, [x_r, 0.0, 0.0], [x_max, 0.0, 0.0]);
    spline_from_path(name, &path)
}

fn arc_steps(r: f64) -> usize {
    ((PI * r / (0.2 * SAMPLE_STEP)) as usize).max(16)
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
}

fn push_line(path: &mut Vec<[f64; 3]>, a: [f64; 3], b: [f64; 3]) {
    let len = dist(a, b);
    let steps = ((len / (0.2 * SAMPLE_STEP)) as usize).max(1);
    let start = if path.last() == Some(&a) { 1 } else { 0 };
    for i in start..=steps {
        let u = i as f64 / steps as f64;
        path.push([a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1]), a[2] + u * (b[2] - a[2])]);
    }
}

/// One left-to-right pass through the braid starting at `pos`; returns the
/// exit position.
fn push_pass(
    path: &mut Vec<[f64; 3]>,
    start: usize,
    word: &[i32],
    xs: &[f64],
    x_l: f64,
    x_r: f64,
    level: &dyn Fn(usize) -> f64,
) -> usize {
    // position before each crossing, and the role at that crossing
    let mut moves = Vec::with_capacity(word.len());
    let mut pos = start;
    for &g in word {
        let i = g.unsigned_abs() as usize;
        let before = pos;
        let lift = if pos == i {
            pos = i + 1;
            if g > 0 { LIFT } else { -LIFT }
        } else if pos == i + 1 {
            pos = i;
            if g > 0 { -LIFT } else { LIFT }
        } else {
            0.0
        };
        moves.push((before, pos, lift));
    }
    let steps = (((x_r - x_l) / (0.2 * SAMPLE_STEP)) as usize).max(1);
    for s in 1..=steps {
        let x = x_l + (x_r - x_l) * s as f64 / steps as f64;
        let mut v = level(start);
        let mut z = 0.0;
        for (k, &(from, to, lift)) in moves.iter().enumerate() {
            let d = x - xs[k];
            if d >= TRANSITION {
                v = level(to);
            } else if d > -TRANSITION {
                let u = (d + TRANSITION) / (2.0 * TRANSITION);
                let step = 0.5 * (1.0 - cos(PI * u));
                v = level(from) + (level(to) - level(from)) * step;
                let c = cos(0.5 * PI * d / TRANSITION);
                z += lift * c * c;
            }
        }
        path.push([x, v, z]);
    }
    pos
}

/// A single curl: the planar trochoid loop `X = a(θ - π) + R sin θ`,
/// `V = R(1 - cos θ)` with height `∓ sin θ`, giving one crossing of the
/// given sign and writhe equal to that sign.
pub fn kink(name: &str, sign: f64) -> Result<LongKnot> {
    let a = 0.45;
    let r = 0.6;
    let hgt = 0.3 * sign;
    let x0 = -a * PI;
    let x_min = x0 - MARGIN;
    let x_max = -x0 + MARGIN;
    let mut path = Vec::new();
    push_line(&mut path, [x_min, 0.0, 0.0], [x0, 0.0, 0.0]);
    let steps = 2000;
    for i in 1..=steps {
        let th = 2.0 * PI * i as f64 / steps as f64;
        path.push([a * (th - PI) + r * sin(th), r * (1.0 - cos(th)), -hgt * sin(th)]);
    }
    push_line(&mut path, [-x0, 0.0, 0.0], [x_max, 0.0, 0.0]);
    spline_from_path(name, &path)
}

/// Sample the dense polyline `path` (axis coordinates, starting and ending
/// on the tail line) uniformly in arclength into spline controls.
pub(crate) fn spline_from_path(name: &str, path: &[[f64; 3]]) -> Result<LongKnot> {
    let mut cum = Vec::with_capacity(path.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for w in path.windows(2) {
        let d = dist(w[0], w[1]);
        acc += d;
        cum.push(acc);
    }
    let n = ((acc / SAMPLE_STEP) as usize).max(4);
    let t_start = path[0][0] / SQRT_2;
    let t_end = path[path.len() - 1][0] / SQRT_2;
    let h = (t_end - t_start) / n as f64;
    let mut ctrl = Vec::with_capacity(n + 3);
    ctrl.push(Vec3::on_axis(t_start - h));
    let mut seg = 0usize;
    for j in 0..=n {
        if j == 0 {
            ctrl.push(Vec3::on_axis(t_start));
            continue;
        }
        if j == n {
            ctrl.push(Vec3::on_axis(t_end));
            continue;
        }
        let s = acc * j as f64 / n as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < s {
            seg += 1;
        }
        let span = cum[seg + 1] - cum[seg];
        let u = if span > 0.0 { (s - cum[seg]) / span } else { 0.0 };
        let a = path[seg];
        let b = path[seg + 1];
        let q = [a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1]), a[2] + u * (b[2] - a[2]) + wobble(s / acc)];
        ctrl.push(AxisCoords { axial: q[0] / SQRT_2, side: q[1], z: q[2] }.to_point());
    }
    ctrl.push(Vec3::on_axis(t_end + h));
    // The near-tail samples are on the axis but at arclength positions;
    // pin the two at each end to their own parameters.
    let m = ctrl.len();
    ctrl[1] = Vec3::on_axis(t_start);
    ctrl[m - 2] = Vec3::on_axis(t_end);
    let piece = SplinePiece::new(t_start - h, h, ctrl, 1e-9)?;
    Ok(LongKnot::from_spline(String::from(name), piece).centered())
}
