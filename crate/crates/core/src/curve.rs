//! Long knots: C² curves `R -> R³` equal to `t -> (t, t, 0)` outside a
//! compact support.
//!
//! A [`LongKnot`] is an immutable, cheaply clonable handle to a [`Shape`].
//! Leaf shapes are uniform cubic B-splines; the other shapes compose them
//! (concatenation, rotation about the tail axis, translation along it, and
//! insertion of a scaled bead that rides the host along its flat framing).

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{cos, floor, sin, sqrt, AxisCoords, Vec3, FRAC_1_SQRT_2};

/// Position and the first two parameter derivatives at one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub p: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
}

impl Jet {
    fn axis(t: f64) -> Self {
        Self {
            p: Vec3::on_axis(t),
            d1: Vec3::AXIS,
            d2: Vec3::ZERO,
        }
    }
}

/// Uniform cubic B-spline with control points at parameters
/// `t0, t0 + h, ..., t0 + (n-1) h`.
///
/// The first two and the last two control points lie on the tail line at
/// their own parameters, so together with the implicit axis control points
/// beyond the array the curve is exactly `(t, t, 0)` outside
/// `[t0, t0 + (n-1) h]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplinePiece {
    t0: f64,
    h: f64,
    ctrl: Vec<Vec3>,
}

impl SplinePiece {
    pub fn new(t0: f64, h: f64, mut ctrl: Vec<Vec3>, tol: f64) -> Result<Self> {
        let n = ctrl.len();
        if n < 5 {
            return Err(Error::InvalidKnot("spline needs at least 5 control points".into()));
        }
        if !(h > 0.0) || !t0.is_finite() {
            return Err(Error::InvalidKnot("spline spacing must be positive".into()));
        }
        for i in [0, 1, n - 2, n - 1] {
            let want = Vec3::on_axis(t0 + i as f64 * h);
            if (ctrl[i] - want).max_abs() > tol {
                return Err(Error::InvalidKnot(alloc::format!(
                    "control point {i} is off the tail line (tail condition)"
                )));
            }
            ctrl[i] = want;
        }
        Ok(Self { t0, h, ctrl })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.t0, self.t0 + (self.ctrl.len() - 1) as f64 * self.h)
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn controls(&self) -> &[Vec3] {
        &self.ctrl
    }

    pub fn param_of(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.h
    }

    fn ctrl_at(&self, i: isize) -> Vec3 {
        if i < 0 || i as usize >= self.ctrl.len() {
            Vec3::on_axis(self.t0 + i as f64 * self.h)
        } else {
            self.ctrl[i as usize]
        }
    }

    pub fn jet(&self, t: f64) -> Jet {
        let (a, b) = self.support();
        if t <= a || t >= b {
            return Jet::axis(t);
        }
        let n = self.ctrl.len();
        let x = (t - self.t0) / self.h;
        let j = (floor(x) as isize).clamp(0, n as isize - 2);
        let u = x - j as f64;
        let v = 1.0 - u;
        let u2 = u * u;
        let u3 = u2 * u;
        let w = [
            v * v * v / 6.0,
            (3.0 * u3 - 6.0 * u2 + 4.0) / 6.0,
            (-3.0 * u3 + 3.0 * u2 + 3.0 * u + 1.0) / 6.0,
            u3 / 6.0,
        ];
        let dw = [
            -0.5 * v * v,
            0.5 * (3.0 * u2 - 4.0 * u),
            0.5 * (-3.0 * u2 + 2.0 * u + 1.0),
            0.5 * u2,
        ];
        let ddw = [v, 3.0 * u - 2.0, 1.0 - 3.0 * u, u];
        let mut p = Vec3::ZERO;
        let mut d1 = Vec3::ZERO;
        let mut d2 = Vec3::ZERO;
        for k in 0..4 {
            let c = self.ctrl_at(j - 1 + k as isize);
            p += w[k] * c;
            d1 += dw[k] * c;
            d2 += ddw[k] * c;
        }
        Jet {
            p,
            d1: (1.0 / self.h) * d1,
            d2: (1.0 / (self.h * self.h)) * d2,
        }
    }

    fn map_controls(&self, f: impl Fn(Vec3) -> Vec3) -> Self {
        let n = self.ctrl.len();
        let ctrl = self
            .ctrl
            .iter()
            .enumerate()
            .map(|(i, &c)| if i < 2 || i + 2 >= n { c } else { f(c) })
            .collect();
        Self { t0: self.t0, h: self.h, ctrl }
    }

    fn shifted(&self, by: f64) -> Self {
        let off = Vec3::new(by, by, 0.0);
        let t0 = self.t0 + by;
        let n = self.ctrl.len();
        let ctrl = self
            .ctrl
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if i < 2 || i + 2 >= n {
                    Vec3::on_axis(t0 + i as f64 * self.h)
                } else {
                    c + off
                }
            })
            .collect();
        Self { t0, h: self.h, ctrl }
    }

    /// Replace interior control points; the four tail-pinned ones are kept.
    pub fn with_interior(&self, f: impl Fn(usize, Vec3) -> Vec3) -> Self {
        let n = self.ctrl.len();
        let ctrl = self
            .ctrl
            .iter()
            .enumerate()
            .map(|(i, &c)| if i < 2 || i + 2 >= n { c } else { f(i, c) })
            .collect();
        Self { t0: self.t0, h: self.h, ctrl }
    }
}

/// Rotation about the tail line `{(t, t, 0)}` by `angle` (right-handed
/// about `(1, 1, 0)`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisRotation {
    cos: f64,
    sin: f64,
}

impl AxisRotation {
    pub fn new(angle: f64) -> Self {
        Self { cos: cos(angle), sin: sin(angle) }
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        // In axis coordinates this is a plane rotation of (side, z).
        let c = AxisCoords::of(v);
        let side = self.cos * c.side - self.sin * c.z;
        let z = self.sin * c.side + self.cos * c.z;
        AxisCoords { axial: c.axial, side, z }.to_point()
    }

    /// Linear part, used for derivatives.
    pub fn apply_vec(&self, v: Vec3) -> Vec3 {
        self.apply(v)
    }

    fn then(&self, o: &Self) -> Self {
        Self {
            cos: self.cos * o.cos - self.sin * o.sin,
            sin: self.sin * o.cos + self.cos * o.sin,
        }
    }
}

/// A scaled copy of `bead` spliced into `host`, centred at host parameter
/// `center`.
///
/// Inside the window `center ± scale·w/2` (with `w` the bead's support
/// width) the bead's axis coordinates `(axial, side, z)` are transported by
/// the host's flat tube map `(σ, v, w) -> host(σ) + v·n(σ) + w·ẑ`, where
/// `n` is the horizontal unit normal of the host. The bead's tails lie on
/// the host, so the splice is as smooth as the host.
#[derive(Clone, Debug)]
pub struct BeadInsertion {
    pub host: LongKnot,
    pub bead: LongKnot,
    pub center: f64,
    pub scale: f64,
}

impl BeadInsertion {
    fn bead_center(&self) -> f64 {
        let (a, b) = self.bead.support();
        0.5 * (a + b)
    }

    pub fn window(&self) -> (f64, f64) {
        let (a, b) = self.bead.support();
        let half = 0.5 * self.scale * (b - a);
        (self.center - half, self.center + half)
    }

    fn to_bead_param(&self, t: f64) -> f64 {
        self.bead_center() + (t - self.center) / self.scale
    }

    fn jet(&self, t: f64) -> Jet {
        let (lo, hi) = self.window();
        if t <= lo || t >= hi {
            return self.host.jet(t);
        }
        let jb = self.bead.jet(self.to_bead_param(t));
        let c = AxisCoords::of(jb.p);
        let axial_d = 0.5 * (jb.d1.x + jb.d1.y);
        let side_d = (jb.d1.y - jb.d1.x) * FRAC_1_SQRT_2;
        let sigma = self.center + self.scale * (c.axial - self.bead_center());
        let hj = self.host.jet(sigma);
        let (n, dn) = side_normal(hj.d1, hj.d2);
        let lam = self.scale;
        let p = hj.p + (lam * c.side) * n + (lam * c.z) * Vec3::UP;
        let d1 = axial_d * (hj.d1 + (lam * c.side) * dn) + side_d * n + jb.d1.z * Vec3::UP;
        // second derivative, without the term in the host's third
        // derivative (of relative size bead diameter × host curvature)
        let axial_dd = 0.5 * (jb.d2.x + jb.d2.y);
        let side_dd = (jb.d2.y - jb.d2.x) * FRAC_1_SQRT_2;
        let d2 = (axial_dd / lam) * (hj.d1 + (lam * c.side) * dn)
            + axial_d * (axial_d * hj.d2 + side_d * dn)
            + (side_dd / lam) * n
            + (side_d * axial_d) * dn
            + (jb.d2.z / lam) * Vec3::UP;
        Jet { p, d1, d2 }
    }
}

/// Horizontal unit normal `ẑ × d / |d_xy|` (pointing to the left of the
/// projected tangent) and its derivative along the curve.
fn side_normal(d1: Vec3, d2: Vec3) -> (Vec3, Vec3) {
    let u = Vec3::new(-d1.y, d1.x, 0.0);
    let du = Vec3::new(-d2.y, d2.x, 0.0);
    let len = u.norm();
    let n = (1.0 / len) * u;
    let dn = (1.0 / len) * (du - n.dot(du) * n);
    (n, dn)
}

#[derive(Clone, Debug)]
pub enum Shape {
    /// The straight line itself, with a nominal support used for layout.
    Axis { support: (f64, f64) },
    Spline(SplinePiece),
    /// Pieces with pairwise disjoint supports, sorted left to right.
    Chain(Vec<LongKnot>),
    Rotated { inner: LongKnot, rotation: AxisRotation },
    Shifted { inner: LongKnot, by: f64 },
    Beaded(BeadInsertion),
}

#[derive(Clone, Debug)]
struct KnotData {
    name: String,
    shape: Shape,
    support: (f64, f64),
    kinks: i32,
}

/// An immutable long knot. Clones share the underlying data.
#[derive(Clone, Debug)]
pub struct LongKnot(Arc<KnotData>);

impl LongKnot {
    fn from_shape(name: String, shape: Shape, kinks: i32) -> Self {
        let support = match &shape {
            Shape::Axis { support } => *support,
            Shape::Spline(s) => s.support(),
            Shape::Chain(parts) => (
                parts.first().map_or(0.0, |p| p.support().0),
                parts.last().map_or(0.0, |p| p.support().1),
            ),
            Shape::Rotated { inner, .. } => inner.support(),
            Shape::Shifted { inner, by } => {
                let (a, b) = inner.support();
                (a + by, b + by)
            }
            Shape::Beaded(ins) => {
                let (a, b) = ins.host.support();
                let (c, d) = ins.window();
                (a.min(c), b.max(d))
            }
        };
        Self(Arc::new(KnotData { name, shape, support, kinks }))
    }

    /// The straight line, with a nominal support of the given width
    /// centred at the origin.
    pub fn unknot(width: f64) -> Self {
        Self::from_shape(
            "unknot".into(),
            Shape::Axis { support: (-0.5 * width, 0.5 * width) },
            0,
        )
    }

    /// Composition of already positioned pieces with disjoint supports.
    pub fn chain(name: &str, pieces: &[LongKnot]) -> Self {
        let mut flat: Vec<LongKnot> = Vec::new();
        for p in pieces {
            match p.shape() {
                Shape::Chain(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(p.clone()),
            }
        }
        flat.sort_by(|a, b| a.support().0.total_cmp(&b.support().0));
        let kinks = pieces.iter().map(LongKnot::kinks).sum();
        Self::from_shape(name.into(), Shape::Chain(flat), kinks)
    }

    pub fn from_spline(name: impl Into<String>, piece: SplinePiece) -> Self {
        Self::from_shape(name.into(), Shape::Spline(piece), 0)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn shape(&self) -> &Shape {
        &self.0.shape
    }

    /// Signed number of framing kinks appended by framing trivialization.
    pub fn kinks(&self) -> i32 {
        self.0.kinks
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        Self(Arc::new(KnotData { name: name.into(), ..(*self.0).clone() }))
    }

    pub(crate) fn with_kinks(&self, kinks: i32) -> Self {
        Self(Arc::new(KnotData { kinks, ..(*self.0).clone() }))
    }

    pub fn support(&self) -> (f64, f64) {
        self.0.support
    }

    pub fn width(&self) -> f64 {
        let (a, b) = self.support();
        b - a
    }

    pub fn is_straight(&self) -> bool {
        match self.shape() {
            Shape::Axis { .. } => true,
            Shape::Chain(parts) => parts.iter().all(LongKnot::is_straight),
            Shape::Rotated { inner, .. } | Shape::Shifted { inner, .. } => inner.is_straight(),
            Shape::Spline(_) | Shape::Beaded(_) => false,
        }
    }

    pub fn jet(&self, t: f64) -> Jet {
        let (a, b) = self.support();
        if t < a || t > b {
            return Jet::axis(t);
        }
        match self.shape() {
            Shape::Axis { .. } => Jet::axis(t),
            Shape::Spline(s) => s.jet(t),
            Shape::Chain(parts) => {
                let i = parts.partition_point(|p| p.support().1 < t);
                match parts.get(i) {
                    Some(p) if p.support().0 <= t => p.jet(t),
                    _ => Jet::axis(t),
                }
            }
            Shape::Rotated { inner, rotation } => {
                let j = inner.jet(t);
                Jet {
                    p: rotation.apply(j.p),
                    d1: rotation.apply_vec(j.d1),
                    d2: rotation.apply_vec(j.d2),
                }
            }
            Shape::Shifted { inner, by } => {
                let j = inner.jet(t - by);
                Jet { p: j.p + Vec3::new(*by, *by, 0.0), ..j }
            }
            Shape::Beaded(ins) => {
                let mut j = ins.jet(t);
                let (lo, hi) = ins.window();
                if t > lo && t < hi {
                    let dt = 1e-5 * ins.scale * ins.bead.width().max(1e-3);
                    let jp = ins.jet(t + dt);
                    let jm = ins.jet(t - dt);
                    j.d2 = (0.5 / dt) * (jp.d1 - jm.d1);
                }
                j
            }
        }
    }

    pub fn eval(&self, t: f64) -> Vec3 {
        self.jet(t).p
    }

    pub fn deriv(&self, t: f64) -> Vec3 {
        self.jet(t).d1
    }

    /// Sorted parameters partitioning the support into pieces on which
    /// the curve turns only a little.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.push_breakpoints(&mut out);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (1.0 + a.abs()));
        out
    }

    fn push_breakpoints(&self, out: &mut Vec<f64>) {
        let (a, b) = self.support();
        match self.shape() {
            Shape::Axis { .. } => {
                out.push(a);
                out.push(b);
            }
            Shape::Spline(s) => {
                let n = s.controls().len();
                for i in 0..n - 1 {
                    let t = s.param_of(i);
                    out.push(t);
                    out.push(t + 0.5 * s.spacing());
                }
                out.push(b);
            }
            Shape::Chain(parts) => {
                for p in parts {
                    p.push_breakpoints(out);
                }
            }
            Shape::Rotated { inner, .. } => inner.push_breakpoints(out),
            Shape::Shifted { inner, by } => {
                let start = out.len();
                inner.push_breakpoints(out);
                for t in &mut out[start..] {
                    *t += by;
                }
            }
            Shape::Beaded(ins) => {
                let (lo, hi) = ins.window();
                let start = out.len();
                ins.host.push_breakpoints(out);
                let mut k = start;
                for i in start..out.len() {
                    if out[i] <= lo || out[i] >= hi {
                        out[k] = out[i];
                        k += 1;
                    }
                }
                out.truncate(k);
                out.push(lo);
                out.push(hi);
                let mut inner = Vec::new();
                ins.bead.push_breakpoints(&mut inner);
                for tb in inner {
                    let t = ins.center + ins.scale * (tb - ins.bead_center());
                    if t > lo && t < hi {
                        out.push(t);
                    }
                }
                // host straight stretch between its support and a tail bead
                let (ha, hb) = ins.host.support();
                if lo > hb || hi < ha {
                    out.push(ha);
                    out.push(hb);
                }
            }
        }
    }

    /// Diagonal of the bounding box of the compact part (at least 1e-9).
    pub fn diameter(&self) -> f64 {
        let bps = self.breakpoints();
        let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for &t in &bps {
            let p = self.eval(t);
            lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
            hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
        }
        if bps.is_empty() {
            return 1e-9;
        }
        (hi - lo).norm().max(1e-9)
    }

    /// Translate along the tail line: `t -> f(t - by) + by·(1, 1, 0)`.
    pub fn shifted(&self, by: f64) -> Self {
        if by == 0.0 {
            return self.clone();
        }
        let name = self.0.name.clone();
        let kinks = self.0.kinks;
        let shape = match self.shape() {
            Shape::Axis { support } => Shape::Axis { support: (support.0 + by, support.1 + by) },
            Shape::Spline(s) => Shape::Spline(s.shifted(by)),
            Shape::Chain(parts) => Shape::Chain(parts.iter().map(|p| p.shifted(by)).collect()),
            Shape::Shifted { inner, by: b0 } => Shape::Shifted { inner: inner.clone(), by: b0 + by },
            Shape::Rotated { inner, rotation } => Shape::Rotated {
                inner: inner.shifted(by),
                rotation: *rotation,
            },
            Shape::Beaded(ins) => Shape::Beaded(BeadInsertion {
                host: ins.host.shifted(by),
                bead: ins.bead.clone(),
                center: ins.center + by,
                scale: ins.scale,
            }),
        };
        Self::from_shape(name, shape, kinks)
    }

    /// Place the support so that it starts at `start`.
    pub fn placed_at(&self, start: f64) -> Self {
        self.shifted(start - self.support().0)
    }

    /// Translate so the support is centred at the origin.
    pub fn centered(&self) -> Self {
        let (a, b) = self.support();
        self.shifted(-0.5 * (a + b))
    }

    /// Compose with the rotation by `angle` about the tail line. The tails
    /// lie on the axis and stay fixed pointwise.
    pub fn rotate_about_axis(&self, angle: f64) -> Self {
        if angle == 0.0 {
            return self.clone();
        }
        let r = AxisRotation::new(angle);
        self.rotated_by(r)
    }

    fn rotated_by(&self, r: AxisRotation) -> Self {
        let name = self.0.name.clone();
        let kinks = self.0.kinks;
        let shape = match self.shape() {
            Shape::Axis { .. } => return self.clone(),
            Shape::Spline(s) => Shape::Spline(s.map_controls(|c| r.apply(c))),
            Shape::Chain(parts) => Shape::Chain(parts.iter().map(|p| p.rotated_by(r)).collect()),
            Shape::Rotated { inner, rotation } => Shape::Rotated {
                inner: inner.clone(),
                rotation: rotation.then(&r),
            },
            Shape::Shifted { inner, by } => Shape::Shifted {
                inner: inner.rotated_by(r),
                by: *by,
            },
            Shape::Beaded(_) => Shape::Rotated { inner: self.clone(), rotation: r },
        };
        Self::from_shape(name, shape, kinks)
    }

    /// Composition of long knots: `k1` then `k2`, laid out left to right
    /// with a fixed gap and centred at the origin.
    pub fn concat(k1: &LongKnot, k2: &LongKnot) -> LongKnot {
        Self::concat_all(&[k1.clone(), k2.clone()])
    }

    pub fn concat_all(parts: &[LongKnot]) -> LongKnot {
        let total: f64 =
            parts.iter().map(LongKnot::width).sum::<f64>() + CONCAT_GAP * (parts.len().max(1) - 1) as f64;
        let mut start = -0.5 * total;
        let mut pieces = Vec::new();
        let mut name = String::new();
        let mut kinks = 0;
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                name.push('#');
            }
            name.push_str(p.name());
            kinks += p.kinks();
            let placed = p.placed_at(start);
            start += p.width() + CONCAT_GAP;
            match placed.shape() {
                Shape::Chain(inner) => pieces.extend(inner.iter().cloned()),
                _ => pieces.push(placed),
            }
        }
        Self::from_shape(name, Shape::Chain(pieces), kinks)
    }

    /// Unit horizontal vector `normalize(f'(t) × ẑ)`, orthogonal to the
    /// tangent: the first vector of the flat framing.
    pub fn flat_frame(&self, t: f64) -> Result<Vec3> {
        let d = self.deriv(t);
        let v = d.cross(Vec3::UP);
        let n = v.norm();
        if n <= 1e-12 * d.norm().max(1e-300) {
            return Err(Error::FrameDegenerate { t });
        }
        Ok((1.0 / n) * v)
    }

    /// Splice a copy of `bead` scaled by `scale` into `self` at parameter
    /// `center`, riding the flat framing.
    pub fn insert_scaled_copy(&self, bead: &LongKnot, center: f64, scale: f64) -> Result<LongKnot> {
        let ins = BeadInsertion { host: self.clone(), bead: bead.clone(), center, scale };
        check_tube(&ins)?;
        Ok(Self::beaded_unchecked(ins))
    }

    pub(crate) fn beaded_unchecked(ins: BeadInsertion) -> LongKnot {
        let name = alloc::format!("{}[{}]", ins.host.name(), ins.bead.name());
        let kinks = ins.host.kinks() + ins.bead.kinks();
        Self::from_shape(name, Shape::Beaded(ins), kinks)
    }
}

/// Gap left between consecutive factors of a composition.
pub const CONCAT_GAP: f64 = 0.5;

/// Largest distance of the bead's compact part from its own axis.
pub fn axis_radius(k: &LongKnot) -> f64 {
    let mut r: f64 = 0.0;
    for t in k.breakpoints() {
        let c = AxisCoords::of(k.eval(t));
        r = r.max(sqrt(c.side * c.side + c.z * c.z));
    }
    r
}

/// Tube check for bead insertion: the transported bead must stay well
/// inside the radius of curvature of the host and away from the host's
/// other strands, and the host's flat frame must exist along the window.
pub fn check_tube(ins: &BeadInsertion) -> Result<()> {
    let radius = ins.scale * axis_radius(&ins.bead);
    let (lo, hi) = ins.window();
    let host = &ins.host;
    let samples = 64;
    let mut limit = f64::INFINITY;
    let mut window_pts = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = lo + (hi - lo) * i as f64 / samples as f64;
        let j = host.jet(t);
        let sp = j.d1.xy().norm();
        if sp <= 1e-9 * j.d1.norm().max(1e-300) {
            return Err(Error::FrameDegenerate { t });
        }
        let k = j.d1.cross(j.d2).norm() / (j.d1.norm() * j.d1.norm() * j.d1.norm());
        if k > 0.0 {
            limit = limit.min(1.0 / k);
        }
        window_pts.push((t, j.p));
    }
    // distance from the window to parts of the host away from it
    let margin = 4.0 * radius + (hi - lo);
    let (ha, hb) = host.support();
    let pts = 400;
    for i in 0..=pts {
        let t = ha + (hb - ha) * i as f64 / pts as f64;
        if t > lo - margin && t < hi + margin {
            continue;
        }
        let p = host.eval(t);
        for &(_, q) in &window_pts {
            limit = limit.min((p - q).norm());
        }
    }
    let limit = 0.25 * limit;
    if radius >= limit {
        return Err(Error::ScaleTooLarge { scale: ins.scale, limit: ins.scale * limit / radius });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bump_spline() -> SplinePiece {
        let h = 0.25;
        let t0 = -1.0;
        let mut ctrl = vec![];
        for i in 0..9 {
            let t = t0 + i as f64 * h;
            let mut p = Vec3::on_axis(t);
            if (2..7).contains(&i) {
                p.z += 0.3;
                p.x -= 0.2;
            }
            ctrl.push(p);
        }
        SplinePiece::new(t0, h, ctrl, 1e-12).unwrap()
    }

    #[test]
    fn spline_tails_are_exact() {
        let k = LongKnot::from_spline("bump", bump_spline());
        for t in [-5.0, -1.0, 1.0, 3.5] {
            assert_eq!(k.eval(t), Vec3::on_axis(t));
            assert_eq!(k.deriv(t), Vec3::AXIS);
        }
    }

    #[test]
    fn spline_is_c1_at_breakpoints() {
        let s = bump_spline();
        for i in 1..8 {
            let t = s.param_of(i);
            let l = s.jet(t - 1e-10);
            let r = s.jet(t + 1e-10);
            assert!((l.d1 - r.d1).norm() < 1e-7);
            assert!((l.d2 - r.d2).norm() < 1e-6);
        }
    }

    #[test]
    fn off_axis_end_control_rejected() {
        let mut ctrl = bump_spline().controls().to_vec();
        ctrl[1].z = 0.1;
        assert!(matches!(SplinePiece::new(-1.0, 0.25, ctrl, 1e-9), Err(Error::InvalidKnot(_))));
    }

    #[test]
    fn rotation_composes() {
        let r = AxisRotation::new(0.4).then(&AxisRotation::new(0.9));
        let q = AxisRotation::new(1.3);
        let v = Vec3::new(0.2, -0.7, 0.5);
        assert!((r.apply(v) - q.apply(v)).norm() < 1e-15);
    }

    #[test]
    fn shift_keeps_tails() {
        let k = LongKnot::from_spline("bump", bump_spline()).shifted(3.0);
        assert_eq!(k.support(), (2.0, 4.0));
        assert_eq!(k.eval(1.5), Vec3::on_axis(1.5));
        let a = LongKnot::from_spline("bump", bump_spline());
        assert!((k.eval(3.1) - a.eval(0.1) - Vec3::new(3.0, 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn flat_frame_on_tail() {
        let k = LongKnot::unknot(1.0);
        let f = k.flat_frame(0.0).unwrap();
        assert!((f - Vec3::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn bead_jet_second_derivative() {
        let host = crate::catalog::make_catalog_knot("trefoil").unwrap();
        let bead = crate::catalog::make_catalog_knot("figure-eight").unwrap();
        let (a, b) = host.support();
        let k = LongKnot::beaded_unchecked(BeadInsertion { host, bead, center: 0.37 * a + 0.63 * b, scale: 0.05 });
        let (a, b) = k.support();
        let h = 1e-6;
        for i in 1..200 {
            let t = a + (b - a) * i as f64 / 200.0;
            let fd = (0.5 / h) * (k.jet(t + h).d1 - k.jet(t - h).d1);
            let d2 = k.jet(t).d2;
            assert!((fd - d2).norm() < 1e-3 * (1.0 + d2.norm()), "t={t} fd={fd:?} d2={d2:?}");
        }
    }
}
