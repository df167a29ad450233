//! One-parameter families of long knots: rotation loops, bead drags,
//! brackets, self-drags, framed drags and the flat representation of the
//! rotation loop.
//!
//! A [`Cycle`] is a list of [`Leg`]s traversed in order; each leg is a
//! family `u -> F(u)` over `u ∈ [0, 1]` and the end of one leg is the start
//! of the next. Cycles are built from a [`CycleRecipe`], which can be
//! rebuilt with a seeded perturbation of every curved constituent.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::make_catalog_knot;
use crate::curve::{check_tube, BeadInsertion, LongKnot, Shape, SplinePiece, CONCAT_GAP};
use crate::diagram::{compute_crossings, gauss_diagram, writhe};
use crate::error::{Error, Result};
use crate::invariants::v2_mod2;
use crate::math::{exp, ln, sin, Vec3, PI, TAU};
use crate::tolerance::ToleranceSet;

/// Timing and size of a bead drag. The leg weights are `delta`,
/// `1 - 2 delta` and `delta` of a unit drag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DragSchedule {
    pub delta: f64,
    /// Diameter of the shrunk bead relative to the diameter of the host.
    pub bead_fraction: f64,
}

impl Default for DragSchedule {
    fn default() -> Self {
        Self { delta: 0.1, bead_fraction: 0.005 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleKind {
    Rotation,
    DragPath,
    Bracket,
    SelfDrag,
    FramedDragLoop,
    FramedSelfDrag,
    HatFlat,
    /// Rotation of the first factor of `k#k'` with `k'` held fixed.
    Primitivity,
}

impl CycleKind {
    pub const ALL: [CycleKind; 8] = [
        CycleKind::Rotation,
        CycleKind::DragPath,
        CycleKind::Bracket,
        CycleKind::SelfDrag,
        CycleKind::FramedDragLoop,
        CycleKind::FramedSelfDrag,
        CycleKind::HatFlat,
        CycleKind::Primitivity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CycleKind::Rotation => "rotation",
            CycleKind::DragPath => "drag_path",
            CycleKind::Bracket => "bracket",
            CycleKind::SelfDrag => "self_drag",
            CycleKind::FramedDragLoop => "framed_drag",
            CycleKind::FramedSelfDrag => "framed_self_drag",
            CycleKind::HatFlat => "hat_flat",
            CycleKind::Primitivity => "primitivity",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s || k.as_str().replace('_', "-") == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }

    pub fn arity(self) -> usize {
        match self {
            CycleKind::Rotation | CycleKind::SelfDrag | CycleKind::FramedSelfDrag | CycleKind::HatFlat => 1,
            _ => 2,
        }
    }

    /// Whether the family is a closed loop (all kinds except a single drag).
    pub fn is_loop(self) -> bool {
        self != CycleKind::DragPath
    }
}

/// What a cycle is, independent of its geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleDescriptor {
    pub kind: CycleKind,
    pub knots: Vec<String>,
    /// Flat framing numbers (writhes) of the constituents as they enter
    /// the construction, after any framing trivialization.
    pub framing: Vec<i32>,
    /// `v2 mod 2` of the constituents.
    pub v2: Vec<u8>,
}

/// Which part of a drag a parameter belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Member {
    /// The big knot along which the bead travels.
    B,
    /// The small knot (the bead).
    S,
}

#[derive(Clone, Debug)]
pub enum LegKind {
    /// Rotate `pieces[index]` by `2πu` about the axis.
    Rotate { pieces: Vec<LongKnot>, index: usize },
    /// Bead `bead` on `host` at centre `center.0 -> center.1` (linear),
    /// scale `scale.0 -> scale.1` (geometric), translation along the tail
    /// line `shift.0 -> shift.1` (linear).
    Drag {
        host: LongKnot,
        bead: LongKnot,
        center: (f64, f64),
        scale: (f64, f64),
        shift: (f64, f64),
    },
    /// Interpolate the controls of `pieces[index]` from `from` to `to`.
    Twist { pieces: Vec<LongKnot>, index: usize, from: SplinePiece, to: SplinePiece },
    /// Translate along the tail line by `u·by`.
    Translate { knot: LongKnot, by: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Rotate,
    Shrink,
    Slide,
    Regrow,
    Twist,
    Untwist,
    Translate,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Rotate => "rotate",
            Phase::Shrink => "shrink",
            Phase::Slide => "slide",
            Phase::Regrow => "regrow",
            Phase::Twist => "twist",
            Phase::Untwist => "untwist",
            Phase::Translate => "translate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Leg {
    pub phase: Phase,
    pub weight: f64,
    pub kind: LegKind,
    /// Index of the drag path this leg belongs to, for drag legs.
    pub drag: Option<usize>,
}

impl Leg {
    pub fn knot_at(&self, u: f64) -> LongKnot {
        match &self.kind {
            LegKind::Rotate { pieces, index } => {
                let mut ps = pieces.clone();
                ps[*index] = pieces[*index].rotate_about_axis(TAU * u);
                LongKnot::chain("", &ps)
            }
            LegKind::Drag { host, bead, center, scale, shift } => {
                let c = center.0 + u * (center.1 - center.0);
                let l = geometric(scale.0, scale.1, u);
                let sh = shift.0 + u * (shift.1 - shift.0);
                let k = LongKnot::beaded_unchecked(BeadInsertion {
                    host: host.clone(),
                    bead: bead.clone(),
                    center: c,
                    scale: l,
                });
                k.shifted(sh)
            }
            LegKind::Twist { pieces, index, from, to } => {
                let p = from.with_interior(|i, c| c + u * (to.controls()[i] - c));
                let mut ps = pieces.clone();
                ps[*index] = LongKnot::from_spline(pieces[*index].name(), p);
                LongKnot::chain("", &ps)
            }
            LegKind::Translate { knot, by } => knot.shifted(u * by),
        }
    }

    /// Parameter window occupied by the bead at `u`, for drag legs.
    pub fn bead_window(&self, u: f64) -> Option<(f64, f64)> {
        match &self.kind {
            LegKind::Drag { bead, center, scale, shift, .. } => {
                let c = center.0 + u * (center.1 - center.0) + shift.0 + u * (shift.1 - shift.0);
                let half = 0.5 * geometric(scale.0, scale.1, u) * bead.width();
                Some((c - half, c + half))
            }
            _ => None,
        }
    }

    pub fn membership(&self, u: f64, t: f64) -> Option<Member> {
        self.bead_window(u).map(|(a, b)| if t > a && t < b { Member::S } else { Member::B })
    }

    /// Parameter chart of the knot at `u`.
    pub fn chart(&self, u: f64) -> Chart {
        match &self.kind {
            LegKind::Drag { bead, center, scale, shift, .. } => {
                let c = center.0 + u * (center.1 - center.0);
                let l = geometric(scale.0, scale.1, u);
                let sh = shift.0 + u * (shift.1 - shift.0);
                let (a, b) = bead.support();
                let half = 0.5 * l * (b - a);
                Chart {
                    shift: sh,
                    bead: Some(BeadChart { lo: c - half, hi: c + half, center: c, scale: l, bead_center: 0.5 * (a + b) }),
                }
            }
            LegKind::Translate { by, .. } => Chart { shift: u * by, bead: None },
            _ => Chart { shift: 0.0, bead: None },
        }
    }
}

/// Intrinsic coordinates on the knot at one instant of a leg: host
/// parameters with the leg's translation removed, and bead parameters
/// inside the bead window. Crossings of a leg move slowly in them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chart {
    shift: f64,
    bead: Option<BeadChart>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct BeadChart {
    lo: f64,
    hi: f64,
    center: f64,
    scale: f64,
    bead_center: f64,
}

impl Chart {
    pub fn to_intrinsic(&self, t: f64) -> (Member, f64) {
        let s = t - self.shift;
        match self.bead {
            Some(b) if s > b.lo && s < b.hi => (Member::S, b.bead_center + (s - b.center) / b.scale),
            _ => (Member::B, s),
        }
    }

    pub fn from_intrinsic(&self, m: Member, x: f64) -> f64 {
        match (m, self.bead) {
            (Member::S, Some(b)) => self.shift + b.center + b.scale * (x - b.bead_center),
            _ => self.shift + x,
        }
    }
}

fn geometric(a: f64, b: f64, u: f64) -> f64 {
    if a == b {
        a
    } else {
        a * exp(u * ln(b / a))
    }
}

#[derive(Clone, Debug)]
pub struct Cycle {
    pub descriptor: CycleDescriptor,
    pub legs: Vec<Leg>,
    /// Number of drag paths, for per-drag accounting.
    pub drags: usize,
}

impl Cycle {
    pub fn total_weight(&self) -> f64 {
        self.legs.iter().map(|l| l.weight).sum()
    }

    /// Global parameter `s ∈ [0, 1]` of local parameter `u` on leg `leg`.
    pub fn global(&self, leg: usize, u: f64) -> f64 {
        let before: f64 = self.legs[..leg].iter().map(|l| l.weight).sum();
        (before + u * self.legs[leg].weight) / self.total_weight()
    }

    /// Leg index and local parameter of global `s`.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let total = self.total_weight();
        let mut acc = 0.0;
        for (i, l) in self.legs.iter().enumerate() {
            if s * total <= acc + l.weight {
                return (i, ((s * total - acc) / l.weight).clamp(0.0, 1.0));
            }
            acc += l.weight;
        }
        (self.legs.len().saturating_sub(1), 1.0)
    }

    pub fn knot_at(&self, s: f64) -> LongKnot {
        if self.legs.is_empty() {
            return LongKnot::unknot(1.0);
        }
        let (i, u) = self.locate(s);
        self.legs[i].knot_at(u)
    }

    /// Host and bead (`B` and `S`) of drag path `index`.
    pub fn drag_members(&self, index: usize) -> Option<(&LongKnot, &LongKnot)> {
        self.legs.iter().find_map(|l| match (&l.kind, l.drag) {
            (LegKind::Drag { host, bead, .. }, Some(d)) if d == index => Some((host, bead)),
            _ => None,
        })
    }

    /// Maximum pointwise distance between consecutive leg ends (and between
    /// the end and the start for loops), with matching Gauss diagrams.
    pub fn check_closed(&self, tol: &ToleranceSet) -> Result<f64> {
        let mut worst: f64 = 0.0;
        let n = self.legs.len();
        let pairs = if self.descriptor.kind.is_loop() { n } else { n.saturating_sub(1) };
        for i in 0..pairs {
            let a = self.legs[i].knot_at(1.0);
            let b = self.legs[(i + 1) % n].knot_at(0.0);
            let d = max_distance(&a, &b);
            worst = worst.max(d);
            let scale = a.diameter().max(1.0);
            if d > 1e-6 * scale || gauss_diagram(&a, tol).word() != gauss_diagram(&b, tol).word() {
                return Err(Error::NotClosed { distance: d });
            }
        }
        Ok(worst)
    }
}

/// Sampled sup distance between two knots over the union of supports.
pub fn max_distance(a: &LongKnot, b: &LongKnot) -> f64 {
    let (a0, a1) = a.support();
    let (b0, b1) = b.support();
    let (lo, hi) = (a0.min(b0), a1.max(b1));
    let n = 4000;
    (0..=n)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            (a.eval(t) - b.eval(t)).norm()
        })
        .fold(0.0, f64::max)
}

/// Seeded smooth random displacement of spline controls.
#[derive(Clone, Debug)]
pub struct Perturbation {
    rng: ChaCha8Rng,
    magnitude: f64,
}

impl Perturbation {
    pub fn new(seed: u64, magnitude: f64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), magnitude }
    }

    /// Add a field `Σ_m a_m sin(mπξ)` (a few random modes per coordinate)
    /// to the interior controls of every spline piece; the field vanishes
    /// on the three controls nearest each end. Amplitudes are relative to
    /// the diameter of `k`.
    pub fn apply(&mut self, k: &LongKnot) -> LongKnot {
        let amp = self.magnitude * k.diameter();
        self.apply_abs(k, amp)
    }

    fn apply_abs(&mut self, k: &LongKnot, amp: f64) -> LongKnot {
        match k.shape() {
            Shape::Axis { .. } => k.clone(),
            Shape::Spline(s) => {
                const MODES: usize = 6;
                let mut coef = [[0.0f64; 3]; MODES];
                for c in coef.iter_mut() {
                    for x in c.iter_mut() {
                        *x = self.rng.gen_range(-1.0..1.0) * amp / MODES as f64;
                    }
                }
                let n = s.controls().len();
                let p = s.with_interior(|i, c| {
                    if i < 3 || i + 4 > n {
                        return c;
                    }
                    let xi = (i - 3) as f64 / (n - 7).max(1) as f64;
                    let mut d = [0.0; 3];
                    for (m, cm) in coef.iter().enumerate() {
                        let w = sin((m + 1) as f64 * PI * xi);
                        for j in 0..3 {
                            d[j] += cm[j] * w;
                        }
                    }
                    c + Vec3::new(d[0], d[1], d[2])
                });
                LongKnot::from_spline(k.name(), p).with_kinks(k.kinks())
            }
            Shape::Chain(parts) => {
                let ps: Vec<LongKnot> = parts.iter().map(|p| self.apply_abs(p, amp)).collect();
                LongKnot::chain(k.name(), &ps).with_kinks(k.kinks())
            }
            Shape::Rotated { .. } | Shape::Shifted { .. } | Shape::Beaded(_) => k.clone(),
        }
    }
}

/// Inputs from which a cycle is (re)built.
#[derive(Clone, Debug)]
pub struct CycleRecipe {
    pub kind: CycleKind,
    pub knots: Vec<LongKnot>,
    pub schedule: DragSchedule,
}

impl CycleRecipe {
    pub fn new(kind: CycleKind, knots: Vec<LongKnot>) -> Result<Self> {
        if knots.len() != kind.arity() {
            return Err(Error::InvalidKnot(alloc::format!(
                "{} takes {} knot(s), got {}",
                kind.as_str(),
                kind.arity(),
                knots.len()
            )));
        }
        Ok(Self { kind, knots, schedule: DragSchedule::default() })
    }

    pub fn from_names(kind: CycleKind, names: &[&str]) -> Result<Self> {
        let knots = names.iter().map(|n| make_catalog_knot(n)).collect::<Result<Vec<_>>>()?;
        Self::new(kind, knots)
    }

    pub fn with_schedule(mut self, schedule: DragSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn build(&self, tol: &ToleranceSet) -> Result<Cycle> {
        self.build_with(tol, None)
    }

    /// Build with every curved constituent (including framing kinks)
    /// perturbed from the given seed.
    pub fn build_perturbed(&self, tol: &ToleranceSet, seed: u64, magnitude: f64) -> Result<Cycle> {
        self.build_with(tol, Some(Perturbation::new(seed, magnitude)))
    }

    fn build_with(&self, tol: &ToleranceSet, mut pert: Option<Perturbation>) -> Result<Cycle> {
        let mut b = Builder { tol: *tol, sched: self.schedule, pert: pert.as_mut() };
        let ks: Vec<LongKnot> = self.knots.iter().map(|k| b.materialize(k)).collect();
        let names: Vec<String> = self.knots.iter().map(|k| k.name().to_string()).collect();
        let (legs, inputs) = match self.kind {
            CycleKind::Rotation => (rotation_legs(&[ks[0].clone()], 0), vec![ks[0].clone()]),
            CycleKind::Primitivity => (rotation_legs(&ks, 0), ks.clone()),
            CycleKind::DragPath => (b.drag_legs(&ks[0], &ks[1], 0)?, ks.clone()),
            CycleKind::FramedDragLoop => {
                let mut l = b.drag_legs(&ks[0], &ks[1], 0)?;
                l.extend(b.drag_legs(&ks[1], &ks[0], 1)?);
                (l, ks.clone())
            }
            CycleKind::FramedSelfDrag => (b.drag_legs(&ks[0], &ks[0], 0)?, vec![ks[0].clone()]),
            CycleKind::Bracket => {
                let t1 = b.trivialize(&ks[0]);
                let t2 = b.trivialize(&ks[1]);
                let mut l = b.drag_legs(&t1, &t2, 0)?;
                l.extend(b.drag_legs(&t2, &t1, 1)?);
                (l, vec![t1, t2])
            }
            CycleKind::SelfDrag => {
                let t = b.trivialize(&ks[0]);
                (b.drag_legs(&t, &t, 0)?, vec![t])
            }
            CycleKind::HatFlat => (b.hat_flat_legs(&ks[0])?, vec![ks[0].clone()]),
        };
        let drags = legs.iter().filter_map(|l| l.drag).max().map_or(0, |d| d + 1);
        let framing = inputs.iter().map(|k| writhe(&compute_crossings(k, tol))).collect();
        let v2 = inputs.iter().map(|k| v2_mod2(k, tol)).collect();
        Ok(Cycle {
            descriptor: CycleDescriptor { kind: self.kind, knots: names, framing, v2 },
            legs,
            drags,
        })
    }
}

struct Builder<'a> {
    tol: ToleranceSet,
    sched: DragSchedule,
    pert: Option<&'a mut Perturbation>,
}

impl Builder<'_> {
    fn materialize(&mut self, k: &LongKnot) -> LongKnot {
        match self.pert.as_deref_mut() {
            Some(p) => p.apply(k),
            None => k.clone(),
        }
    }

    fn kink(&mut self, sign: i32) -> LongKnot {
        let k = make_catalog_knot(if sign > 0 { "kink+" } else { "kink-" }).expect("catalog kink");
        self.materialize(&k)
    }

    fn trivialize(&mut self, k: &LongKnot) -> LongKnot {
        let w = writhe(&compute_crossings(k, &self.tol));
        if w == 0 {
            return k.clone();
        }
        let mut parts: Vec<LongKnot> = (0..w.unsigned_abs()).map(|_| self.kink(-w.signum())).collect();
        parts.push(k.clone());
        LongKnot::concat_all(&parts).with_name(k.name()).with_kinks(k.kinks() - w)
    }

    /// Legs from `concat(host, bead)` to `concat(bead, host)`.
    fn drag_legs(&mut self, host: &LongKnot, bead: &LongKnot, index: usize) -> Result<Vec<Leg>> {
        drag_legs(host, bead, &self.sched, index)
    }

    fn hat_flat_legs(&mut self, k: &LongKnot) -> Result<Vec<Leg>> {
        let kink = self.kink(1);
        if !matches!(kink.shape(), Shape::Spline(_)) {
            return Err(Error::InvalidKnot("kink must be a spline".into()));
        }
        let wk = kink.width();
        let total = wk + CONCAT_GAP + k.width();
        let left = -0.5 * total;
        let kink_l = kink.placed_at(left);
        let Shape::Spline(kink_lp) = kink_l.shape() else { unreachable!() };
        let k_r = k.placed_at(0.5 * total - k.width());
        let straight_l = straighten(kink_lp);
        let mut legs = vec![Leg {
            phase: Phase::Twist,
            weight: 0.25,
            kind: LegKind::Twist {
                pieces: vec![LongKnot::from_spline("kink+", straight_l.clone()), k_r.clone()],
                index: 0,
                from: straight_l,
                to: kink_lp.clone(),
            },
            drag: None,
        }];
        legs.extend(drag_legs(&kink, k, &self.sched, 0)?);
        let k_l = k.placed_at(left);
        let kink_r = kink.placed_at(0.5 * total - wk);
        let Shape::Spline(kink_rp) = kink_r.shape() else { unreachable!() };
        let straight_r = straighten(kink_rp);
        legs.push(Leg {
            phase: Phase::Untwist,
            weight: 0.25,
            kind: LegKind::Twist {
                pieces: vec![k_l.clone(), kink_r.clone()],
                index: 1,
                from: kink_rp.clone(),
                to: straight_r,
            },
            drag: None,
        });
        legs.push(Leg {
            phase: Phase::Translate,
            weight: 0.1,
            kind: LegKind::Translate { knot: k_l, by: wk + CONCAT_GAP },
            drag: None,
        });
        Ok(legs)
    }
}

fn straighten(p: &SplinePiece) -> SplinePiece {
    p.with_interior(|i, _| Vec3::on_axis(p.param_of(i)))
}

/// Single rotation leg turning `pieces[index]` of the composition of
/// `pieces` a full turn.
pub fn rotation_legs(pieces: &[LongKnot], index: usize) -> Vec<Leg> {
    let laid = lay_out(pieces);
    vec![Leg { phase: Phase::Rotate, weight: 1.0, kind: LegKind::Rotate { pieces: laid, index }, drag: None }]
}

/// Positions of the factors of `concat_all(pieces)`.
pub fn lay_out(pieces: &[LongKnot]) -> Vec<LongKnot> {
    let total: f64 = pieces.iter().map(LongKnot::width).sum::<f64>() + CONCAT_GAP * (pieces.len().max(1) - 1) as f64;
    let mut start = -0.5 * total;
    pieces
        .iter()
        .map(|p| {
            let q = p.placed_at(start);
            start += p.width() + CONCAT_GAP;
            q
        })
        .collect()
}

/// The three legs (shrink, slide, regrow) of the drag of `bead` along
/// `host`, from `concat(host, bead)` to `concat(bead, host)`.
pub fn drag_legs(host: &LongKnot, bead: &LongKnot, sched: &DragSchedule, index: usize) -> Result<Vec<Leg>> {
    let (wb, ws) = (host.width(), bead.width());
    let total = wb + CONCAT_GAP + ws;
    let host_p = host.placed_at(-0.5 * total);
    let bead_c = bead.centered();
    let c0 = 0.5 * total - 0.5 * ws;
    let c1 = -0.5 * total - CONCAT_GAP - 0.5 * ws;
    let eps = bead_scale(host, bead, sched);
    let slide = LegKind::Drag {
        host: host_p.clone(),
        bead: bead_c.clone(),
        center: (c0, c1),
        scale: (eps, eps),
        shift: (0.0, 0.0),
    };
    // the bead must fit the tube everywhere it travels
    if !host.is_straight() {
        let (ha, hb) = host_p.support();
        let n = 48;
        for i in 0..=n {
            let c = ha + (hb - ha) * i as f64 / n as f64;
            check_tube(&BeadInsertion { host: host_p.clone(), bead: bead_c.clone(), center: c, scale: eps })?;
        }
    }
    let d = sched.delta;
    Ok(vec![
        Leg {
            phase: Phase::Shrink,
            weight: d,
            kind: LegKind::Drag {
                host: host_p.clone(),
                bead: bead_c.clone(),
                center: (c0, c0),
                scale: (1.0, eps),
                shift: (0.0, 0.0),
            },
            drag: Some(index),
        },
        Leg { phase: Phase::Slide, weight: 1.0 - 2.0 * d, kind: slide, drag: Some(index) },
        Leg {
            phase: Phase::Regrow,
            weight: d,
            kind: LegKind::Drag {
                host: host_p,
                bead: bead_c,
                center: (c1, c1),
                scale: (eps, 1.0),
                shift: (0.0, CONCAT_GAP + ws),
            },
            drag: Some(index),
        },
    ])
}

/// Scale factor giving the bead a diameter of `bead_fraction` times the
/// host's diameter.
pub fn bead_scale(host: &LongKnot, bead: &LongKnot, sched: &DragSchedule) -> f64 {
    if bead.is_straight() {
        return sched.bead_fraction;
    }
    (sched.bead_fraction * host.diameter() / bead.diameter()).min(1.0)
}

/// Convenience constructors on catalog knots.
pub fn rotation_cycle(k: &LongKnot, tol: &ToleranceSet) -> Result<Cycle> {
    CycleRecipe::new(CycleKind::Rotation, vec![k.clone()])?.build(tol)
}

pub fn drag_path(b: &LongKnot, s: &LongKnot, sched: DragSchedule, tol: &ToleranceSet) -> Result<Cycle> {
    CycleRecipe::new(CycleKind::DragPath, vec![b.clone(), s.clone()])?
        .with_schedule(sched)
        .build(tol)
}

pub fn bracket(k1: &LongKnot, k2: &LongKnot, tol: &ToleranceSet) -> Result<Cycle> {
    CycleRecipe::new(CycleKind::Bracket, vec![k1.clone(), k2.clone()])?.build(tol)
}

pub fn self_drag(k: &LongKnot, tol: &ToleranceSet) -> Result<Cycle> {
    CycleRecipe::new(CycleKind::SelfDrag, vec![k.clone()])?.build(tol)
}

pub fn framed_drag_loop(k1: &LongKnot, k2: &LongKnot, tol: &ToleranceSet) -> Result<Cycle> {
    CycleRecipe::new(CycleKind::FramedDragLoop, vec![k1.clone(), k2.clone()])?.build(tol)
}

pub fn hat_flat_representation(k: &LongKnot, tol: &ToleranceSet) -> Result<Cycle> {
    CycleRecipe::new(CycleKind::HatFlat, vec![k.clone()])?.build(tol)
}

/// `k` with `|w|` kinks of sign `-sgn w` composed on its left, where `w`
/// is the writhe of `k`; the result has writhe zero.
pub fn trivialize_framing(k: &LongKnot, tol: &ToleranceSet) -> LongKnot {
    Builder { tol: *tol, sched: DragSchedule::default(), pert: None }.trivialize(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_catalog_knot;

    fn cat(n: &str) -> LongKnot {
        make_catalog_knot(n).unwrap()
    }

    #[test]
    fn trivialization() {
        let tol = ToleranceSet::default();
        let t = trivialize_framing(&cat("trefoil"), &tol);
        assert_eq!(writhe(&compute_crossings(&t, &tol)), 0);
        assert_eq!(compute_crossings(&t, &tol).len(), 6);
        let tt = trivialize_framing(&t, &tol);
        assert_eq!(compute_crossings(&tt, &tol).len(), 6);
        let u = trivialize_framing(&cat("unknot"), &tol);
        assert!(u.is_straight());
    }

    #[test]
    fn rotation_is_an_isometry_fixing_the_axis() {
        let tol = ToleranceSet::default();
        let c = rotation_cycle(&cat("trefoil"), &tol).unwrap();
        let k0 = c.knot_at(0.0);
        let kh = c.knot_at(0.5);
        for i in 0..50 {
            let t = -3.0 + 0.12 * i as f64;
            let a = crate::math::AxisCoords::of(k0.eval(t));
            let b = crate::math::AxisCoords::of(kh.eval(t));
            assert!((a.axial - b.axial).abs() < 1e-12);
            let ra = crate::math::sqrt(a.side * a.side + a.z * a.z);
            let rb = crate::math::sqrt(b.side * b.side + b.z * b.z);
            assert!((ra - rb).abs() < 1e-12);
        }
        assert!(max_distance(&c.knot_at(0.0), &c.knot_at(1.0)) < 1e-12);
    }

    #[test]
    fn drag_endpoints_are_the_two_compositions() {
        let tol = ToleranceSet::default();
        let b = cat("kink+");
        let s = cat("trefoil");
        let c = drag_path(&b, &s, DragSchedule::default(), &tol).unwrap();
        let start = c.knot_at(0.0);
        let end = c.knot_at(1.0);
        assert!(max_distance(&start, &LongKnot::concat(&b, &s)) < 1e-9);
        assert!(max_distance(&end, &LongKnot::concat(&s, &b)) < 1e-9);
        c.check_closed(&tol).unwrap();
    }

    #[test]
    fn loops_close() {
        let tol = ToleranceSet::default();
        for c in [
            bracket(&cat("trefoil"), &cat("figure-eight"), &tol).unwrap(),
            self_drag(&cat("trefoil"), &tol).unwrap(),
            hat_flat_representation(&cat("trefoil"), &tol).unwrap(),
        ] {
            c.check_closed(&tol).unwrap();
        }
    }

    #[test]
    fn crossings_split_by_membership_during_slide() {
        let tol = ToleranceSet::default();
        let c = drag_path(&cat("trefoil"), &cat("figure-eight"), DragSchedule::default(), &tol).unwrap();
        let slide = &c.legs[1];
        let k = slide.knot_at(0.5);
        let (a, b) = slide.bead_window(0.5).unwrap();
        let cs = compute_crossings(&k, &tol);
        let inside = cs.iter().filter(|x| x.lo > a && x.hi < b).count();
        assert_eq!(inside, 4);
        for x in &cs {
            for t in [x.lo, x.hi] {
                assert!((t - a).abs() > 1e-6 && (t - b).abs() > 1e-6);
            }
        }
    }

    #[test]
    fn perturbation_is_small_and_seeded() {
        let k = cat("trefoil");
        let a = Perturbation::new(7, 1e-4).apply(&k);
        let b = Perturbation::new(7, 1e-4).apply(&k);
        let c = Perturbation::new(8, 1e-4).apply(&k);
        assert_eq!(max_distance(&a, &b), 0.0);
        let d = max_distance(&a, &c);
        assert!(d > 0.0 && d < 1e-3 * k.diameter());
        let (lo, hi) = k.support();
        assert_eq!(a.eval(lo - 0.1), k.eval(lo - 0.1));
        assert_eq!(a.eval(hi), k.eval(hi));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in CycleKind::ALL {
            assert_eq!(CycleKind::parse(k.as_str()).unwrap(), k);
        }
        assert!(CycleKind::parse("spin").is_err());
    }
}
