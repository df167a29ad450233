//! Sweeping a cycle for the events of the combinatorial formula and
//! summing their multiplicities mod 2.
//!
//! Each leg is sampled on a uniform grid; crossings of neighbouring samples
//! are matched by Newton continuation, and an interval is bisected until
//! the matching is a safe bijection (or the interval is tiny, in which case
//! unmatched crossings are births and deaths of Reidemeister moves). On a
//! clean interval, projection triple points show up as exactly three swaps
//! in the parameter order of crossing endpoints, and right-tangent events as
//! sign changes of the projected tangent at the lower point of a crossing.

use core::f64::consts::TAU;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::curve::LongKnot;
use crate::cycles::{Chart, Cycle, CycleRecipe, Leg, Member, Phase};
use crate::diagram::{crossing_search_scaled, refine_crossing, Crossing};
use crate::error::{Error, Result};
use crate::math::{atan2, floor, Vec2, Vec3};
use crate::tolerance::ToleranceSet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepConfig {
    /// Grid samples over the whole cycle, split among legs by weight.
    pub samples: usize,
    pub tol: ToleranceSet,
    pub newton_iters: u32,
    /// Events closer than this in `s` with the same witness are one event.
    pub dedup: f64,
    /// Perturb the cycle from this seed before the first attempt.
    pub seed: Option<u64>,
    /// Relative magnitude of retry perturbations.
    pub perturbation: f64,
    pub retries: u32,
    /// Worker threads with the `parallel` feature; 0 uses the default pool.
    pub workers: usize,
    /// Smallest leg-parameter interval the bisection produces.
    pub min_width: f64,
}

/// Fraction of `min_width` down to which unresolvable intervals are split.
const REFINE_FLOOR: f64 = 1e-4;

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            samples: 2048,
            tol: ToleranceSet::default(),
            newton_iters: 40,
            dedup: 1e-10,
            seed: None,
            perturbation: 1e-4,
            retries: 3,
            workers: 0,
            min_width: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    TriplePoint,
    RightTangent,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::TriplePoint => "triple_point",
            EventKind::RightTangent => "right_tangent",
        }
    }
}

/// One counted configuration of an event: which condition and the curve
/// parameters of its points in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub condition: u8,
    pub points: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventRecord {
    /// Parameter of the whole cycle in `[0, 1]`.
    pub s: f64,
    pub leg: usize,
    /// Parameter within the leg.
    pub u: f64,
    pub phase: Phase,
    pub drag: Option<usize>,
    pub kind: EventKind,
    /// `t1 < t2 < t3` for triple points, the crossing `(b, d)` otherwise.
    pub witness: Vec<f64>,
    pub mult_i: u32,
    pub mult_ii: u32,
    pub mult_iii: u32,
    pub configurations: Vec<Configuration>,
    pub residual: f64,
    pub condition: f64,
    /// Bead window at the event, for drag legs.
    pub bead: Option<(f64, f64)>,
    /// Found at the birth or death of a crossing pair rather than along a
    /// continued crossing; located only to within one sample.
    pub fringe: bool,
}

impl EventRecord {
    pub fn multiplicity(&self) -> u32 {
        self.mult_i + self.mult_ii + self.mult_iii
    }

    pub fn membership(&self, t: f64) -> Option<Member> {
        self.bead.map(|(a, b)| if t > a && t < b { Member::S } else { Member::B })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub i: u64,
    pub ii: u64,
    pub iii: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.i + self.ii + self.iii
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleValue {
    pub parity: u8,
    pub counts: Counts,
    pub events: Vec<EventRecord>,
    /// Perturbation retries used.
    pub retries: u32,
    /// Reidemeister births and deaths of crossings met along the way.
    pub births: usize,
    pub deaths: usize,
    /// Number of knot diagrams computed.
    pub diagrams: usize,
}

impl CocycleValue {
    fn from_events(events: Vec<EventRecord>, births: usize, deaths: usize, diagrams: usize) -> Self {
        let mut counts = Counts::default();
        for e in &events {
            counts.i += e.mult_i as u64;
            counts.ii += e.mult_ii as u64;
            counts.iii += e.mult_iii as u64;
        }
        Self { parity: (counts.total() % 2) as u8, counts, events, retries: 0, births, deaths, diagrams }
    }

    pub fn triple_points(&self) -> impl Iterator<Item = &EventRecord> {
        self.events.iter().filter(|e| e.kind == EventKind::TriplePoint)
    }

    pub fn right_tangents(&self) -> impl Iterator<Item = &EventRecord> {
        self.events.iter().filter(|e| e.kind == EventKind::RightTangent)
    }

    /// Parity of the events on the legs of one phase.
    pub fn phase_parity(&self, phase: Phase) -> u8 {
        (self.events.iter().filter(|e| e.phase == phase).map(|e| e.multiplicity() as u64).sum::<u64>() % 2) as u8
    }

    /// Parity restricted to one drag path of the cycle.
    pub fn drag_parity(&self, drag: usize) -> u8 {
        (self.events.iter().filter(|e| e.drag == Some(drag)).map(|e| e.multiplicity() as u64).sum::<u64>() % 2) as u8
    }
}

#[derive(Clone)]
struct Sample {
    u: f64,
    knot: LongKnot,
    cs: Vec<Crossing>,
    /// Crossing endpoints in the leg's intrinsic chart.
    ends: Vec<[(Member, f64); 2]>,
    sep: Vec<f64>,
    chart: Chart,
    unresolved: usize,
}

struct Ctx<'a> {
    leg: &'a Leg,
    cfg: &'a SweepConfig,
    scale: f64,
}

/// Interval-level failure carrying the leg parameter.
#[derive(Debug)]
enum Fail {
    Triple(f64),
    Tangent(f64),
    Cone(f64),
    Unresolved(f64),
}

#[derive(Default)]
struct Partial {
    events: Vec<EventRecord>,
    births: usize,
    deaths: usize,
    diagrams: usize,
}

impl Ctx<'_> {
    fn sample(&self, u: f64) -> Sample {
        let knot = self.leg.knot_at(u);
        let set = crossing_search_scaled(&knot, &self.cfg.tol, self.scale);
        let chart = self.leg.chart(u);
        let ends: Vec<_> = set.crossings.iter().map(|c| [chart.to_intrinsic(c.lo), chart.to_intrinsic(c.hi)]).collect();
        let sep = separations(&ends);
        Sample { u, knot, cs: set.crossings, ends, sep, chart, unresolved: set.unresolved }
    }

    fn root_tol(&self) -> f64 {
        self.cfg.tol.root * self.scale
    }

    fn process(&self, a: &Sample, b: &Sample, out: &mut Partial) -> core::result::Result<(), Fail> {
        let mut stack: Vec<(Sample, Sample)> = vec![(a.clone(), b.clone())];
        while let Some((a, b)) = stack.pop() {
            match self.examine(&a, &b, out)? {
                Verdict::Done => {}
                Verdict::Split => {
                    let m = self.sample(0.5 * (a.u + b.u));
                    out.diagrams += 1;
                    stack.push((m.clone(), b));
                    stack.push((a, m));
                }
            }
        }
        Ok(())
    }

    fn examine(&self, a: &Sample, b: &Sample, out: &mut Partial) -> core::result::Result<Verdict, Fail> {
        let can_split = b.u - a.u > self.cfg.min_width;
        // events crowded into one interval at min width get a few more decades
        let can_refine = b.u - a.u > self.cfg.min_width * REFINE_FLOOR;
        if a.unresolved > 0 || b.unresolved > 0 {
            return Err(Fail::Unresolved(if a.unresolved > 0 { a.u } else { b.u }));
        }
        let m = self.matching(a, b);
        if !m.clean() && (can_split || can_refine && m.ambiguous(a, b)) {
            return Ok(Verdict::Split);
        }
        let inv = inversions(a, b, &m.pairs);
        let triangle = if inv.is_empty() {
            None
        } else {
            match triangle_of(a, &m.pairs, &inv) {
                Some(t) => Some(t),
                None if can_refine => return Ok(Verdict::Split),
                None => {
                    return Err(Fail::Triple(a.u))
                }
            }
        };
        let mut tangents = Vec::new();
        for (pi, &(i, j)) in m.pairs.iter().enumerate() {
            let (ca, cb) = (&a.cs[i], &b.cs[j]);
            if ca.lo_above {
                continue;
            }
            let ta = a.knot.deriv(ca.lo).xy();
            let tb = b.knot.deriv(cb.lo).xy();
            let turned = ta.dot(tb) <= 0.0;
            let flips = (ta.y > 0.0) != (tb.y > 0.0);
            if turned && can_split {
                return Ok(Verdict::Split);
            }
            if flips {
                if ta.x > 0.0 && tb.x > 0.0 {
                    tangents.push(pi);
                } else if !(ta.x < 0.0 && tb.x < 0.0) {
                    if can_refine {
                        return Ok(Verdict::Split);
                    }
                    return Err(Fail::Tangent(a.u));
                }
            }
        }
        if triangle.is_some() && !tangents.is_empty() {
            if can_refine {
                return Ok(Verdict::Split);
            }
            return Err(Fail::Tangent(a.u));
        }
        if let Some(tri) = triangle {
            match self.triple_event(a, b, &m.pairs, &tri) {
                Ok(ev) => out.events.push(ev),
                Err(_) if can_refine => return Ok(Verdict::Split),
                Err(f) => return Err(f),
            }
        }
        for pi in tangents {
            out.events.push(self.tangent_event(a, b, &m.pairs, pi)?);
        }
        out.events.extend(self.fringe_tangents(b, &m.born));
        out.events.extend(self.fringe_tangents(a, &m.lost));
        out.births += m.born.len();
        out.deaths += m.lost.len();
        Ok(Verdict::Done)
    }

    fn matching(&self, a: &Sample, b: &Sample) -> Matching {
        let tol = self.root_tol();
        let close = self.cfg.tol.dedup * self.scale;
        let mut pairs = Vec::with_capacity(a.cs.len());
        let mut hit = vec![false; b.cs.len()];
        let mut lost = Vec::new();
        for (i, ca) in a.cs.iter().enumerate() {
            let [(m1, x1), (m2, x2)] = a.ends[i];
            let guess = (b.chart.from_intrinsic(m1, x1), b.chart.from_intrinsic(m2, x2));
            let found = refine_crossing(&b.knot, guess.0, guess.1, tol).and_then(|(p, q)| {
                let (p, q) = if p < q { (p, q) } else { (q, p) };
                let j = b
                    .cs
                    .iter()
                    .position(|cb| (cb.lo - p).abs() <= close && (cb.hi - q).abs() <= close)?;
                let cb = &b.cs[j];
                let mv = move_distance(a.ends[i], b.ends[j]);
                let ok = !hit[j]
                    && cb.lo_above == ca.lo_above
                    && cb.sign == ca.sign
                    && mv < 0.25 * a.sep[i]
                    && mv < 0.25 * b.sep[j];
                ok.then_some(j)
            });
            match found {
                Some(j) => {
                    hit[j] = true;
                    pairs.push((i, j));
                }
                None => lost.push(i),
            }
        }
        let born = (0..b.cs.len()).filter(|&j| !hit[j]).collect();
        Matching { pairs, lost, born }
    }

    fn continued(&self, k: &LongKnot, ca: &Crossing, cb: &Crossing, w: f64) -> Option<(f64, f64)> {
        let lo = ca.lo + w * (cb.lo - ca.lo);
        let hi = ca.hi + w * (cb.hi - ca.hi);
        refine_crossing(k, lo, hi, self.root_tol()).map(|(p, q)| if p < q { (p, q) } else { (q, p) })
    }

    fn tangent_event(
        &self,
        a: &Sample,
        b: &Sample,
        pairs: &[(usize, usize)],
        pi: usize,
    ) -> core::result::Result<EventRecord, Fail> {
        let (i, j) = pairs[pi];
        let (ca, cb) = (a.cs[i], b.cs[j]);
        let g = |k: &LongKnot, t: f64| {
            let d = k.deriv(t).xy();
            d.y / d.norm()
        };
        let g0 = g(&a.knot, ca.lo);
        let g1 = g(&b.knot, cb.lo);
        if (g1 - g0).abs() < 1e-13 {
            return Err(Fail::Tangent(a.u));
        }
        let (mut u0, mut u1) = (a.u, b.u);
        let mut s0 = g0 > 0.0;
        let mut best = (0.5 * (u0 + u1), ca.lo, ca.hi, g0);
        for _ in 0..64 {
            let um = 0.5 * (u0 + u1);
            let w = (um - a.u) / (b.u - a.u);
            let k = self.leg.knot_at(um);
            let Some((lo, hi)) = self.continued(&k, &ca, &cb, w) else {
                return Err(Fail::Tangent(um));
            };
            let gm = g(&k, lo);
            best = (um, lo, hi, gm);
            if (gm > 0.0) == s0 {
                u0 = um;
                s0 = gm > 0.0;
            } else {
                u1 = um;
            }
            if u1 - u0 < 1e-15 * (1.0 + um.abs()) {
                break;
            }
        }
        let (u, lo, hi, gm) = best;
        let k = self.leg.knot_at(u);
        let d = k.deriv(lo).xy();
        if d.x <= 0.0 {
            return Err(Fail::Tangent(u));
        }
        let cres = (k.eval(lo).xy() - k.eval(hi).xy()).norm();
        let w = (u - a.u) / (b.u - a.u);
        let mut configs = Vec::new();
        for (qi, &(i2, j2)) in pairs.iter().enumerate() {
            if qi == pi {
                continue;
            }
            let (ka, kb) = (&a.cs[i2], &b.cs[j2]);
            if ka.lo_above && ka.lo < ca.lo && ca.lo < ka.hi && ka.hi < ca.hi {
                let al = ka.lo + w * (kb.lo - ka.lo);
                let ah = ka.hi + w * (kb.hi - ka.hi);
                configs.push(Configuration { condition: 2, points: vec![al, lo, ah, hi] });
            }
        }
        let slope = (g1 - g0) / (b.u - a.u);
        Ok(EventRecord {
            s: u,
            leg: 0,
            u,
            phase: self.leg.phase,
            drag: self.leg.drag,
            kind: EventKind::RightTangent,
            witness: vec![lo, hi],
            mult_i: 0,
            mult_ii: configs.len() as u32,
            mult_iii: 0,
            configurations: configs,
            residual: gm.abs().max(cres / self.scale),
            condition: 1.0 / slope.abs(),
            bead: self.leg.bead_window(u),
            fringe: false,
        })
    }

    /// Right-tangent events of crossings that are born or die inside an
    /// interval too narrow to split.
    ///
    /// Crossings appear and disappear in pairs at a tangency of the two
    /// strands. The lower point of each crossing of a pair is compared with
    /// the tangency point, approximated by the midpoint of the pair.
    fn fringe_tangents(&self, x: &Sample, idx: &[usize]) -> Vec<EventRecord> {
        let mut events = Vec::new();
        let mut used = vec![false; idx.len()];
        for p in 0..idx.len() {
            if used[p] {
                continue;
            }
            let ci = &x.cs[idx[p]];
            let partner = (p + 1..idx.len())
                .filter(|&q| !used[q])
                .filter(|&q| {
                    let cj = &x.cs[idx[q]];
                    cj.lo_above == ci.lo_above && cj.sign != ci.sign
                })
                .map(|q| (q, end_distance(x.ends[idx[p]], x.ends[idx[q]])))
                .filter(|&(_, d)| d.is_finite())
                .min_by(|a, b| a.1.total_cmp(&b.1));
            let Some((q, _)) = partner else { continue };
            used[p] = true;
            used[q] = true;
            if ci.lo_above {
                continue;
            }
            let cj = &x.cs[idx[q]];
            let mid = 0.5 * (ci.lo + cj.lo);
            let t0 = x.knot.deriv(mid).xy();
            for (own, other) in [(idx[p], idx[q]), (idx[q], idx[p])] {
                let c = &x.cs[own];
                if !sweeps_right(t0, x.knot.deriv(c.lo).xy()) {
                    continue;
                }
                let mut configs = Vec::new();
                for (k, kc) in x.cs.iter().enumerate() {
                    if k == own || k == other {
                        continue;
                    }
                    if kc.lo_above && kc.lo < c.lo && c.lo < kc.hi && kc.hi < c.hi {
                        configs.push(Configuration { condition: 2, points: vec![kc.lo, c.lo, kc.hi, c.hi] });
                    }
                }
                events.push(EventRecord {
                    s: x.u,
                    leg: 0,
                    u: x.u,
                    phase: self.leg.phase,
                    drag: self.leg.drag,
                    kind: EventKind::RightTangent,
                    witness: vec![c.lo, c.hi],
                    mult_i: 0,
                    mult_ii: configs.len() as u32,
                    mult_iii: 0,
                    configurations: configs,
                    residual: 0.0,
                    condition: f64::INFINITY,
                    bead: self.leg.bead_window(x.u),
                    fringe: true,
                });
            }
        }
        events
    }

    fn triple_event(
        &self,
        a: &Sample,
        b: &Sample,
        pairs: &[(usize, usize)],
        tri: &Triangle,
    ) -> core::result::Result<EventRecord, Fail> {
        let [x, y, z] = tri.crossings;
        let (xa, xb) = (&a.cs[pairs[x].0], &b.cs[pairs[x].1]);
        let (ya, yb) = (&a.cs[pairs[y].0], &b.cs[pairs[y].1]);
        let (za, zb) = (&a.cs[pairs[z].0], &b.cs[pairs[z].1]);
        // where the three swapping gaps vanish, linearly
        let zero = |g0: f64, g1: f64| if g0 == g1 { 0.5 } else { (g0 / (g0 - g1)).clamp(0.0, 1.0) };
        let w0 = (zero(xa.lo - ya.lo, xb.lo - yb.lo)
            + zero(xa.hi - za.lo, xb.hi - zb.lo)
            + zero(ya.hi - za.hi, yb.hi - zb.hi))
            / 3.0;
        let lerp = |p: f64, q: f64| p + w0 * (q - p);
        let mut v = [
            0.5 * (lerp(xa.lo, xb.lo) + lerp(ya.lo, yb.lo)),
            0.5 * (lerp(xa.hi, xb.hi) + lerp(za.lo, zb.lo)),
            0.5 * (lerp(ya.hi, yb.hi) + lerp(za.hi, zb.hi)),
            a.u + w0 * (b.u - a.u),
        ];
        let width = b.u - a.u;
        let h = 1e-3 * width;
        let mut cond = 1.0;
        let mut res = f64::INFINITY;
        for _ in 0..self.cfg.newton_iters {
            let k = self.leg.knot_at(v[3]);
            let kp = self.leg.knot_at(v[3] + h);
            let km = self.leg.knot_at(v[3] - h);
            let j1 = k.jet(v[0]);
            let j2 = k.jet(v[1]);
            let j3 = k.jet(v[2]);
            let f12 = j1.p.xy() - j2.p.xy();
            let f13 = j1.p.xy() - j3.p.xy();
            res = f12.norm().max(f13.norm());
            let du = |t: f64| ((0.5 / h) * (kp.eval(t) - km.eval(t))).xy();
            let (d1, d2, d3) = (du(v[0]), du(v[1]), du(v[2]));
            let (a1, a2, a3) = (j1.d1.xy(), j2.d1.xy(), j3.d1.xy());
            let mut m = [
                [a1.x, -a2.x, 0.0, d1.x - d2.x, -f12.x],
                [a1.y, -a2.y, 0.0, d1.y - d2.y, -f12.y],
                [a1.x, 0.0, -a3.x, d1.x - d3.x, -f13.x],
                [a1.y, 0.0, -a3.y, d1.y - d3.y, -f13.y],
            ];
            let Some((dx, c)) = solve4(&mut m) else {
                return Err(Fail::Triple(v[3]));
            };
            cond = c;
            for q in 0..4 {
                v[q] += dx[q];
            }
            let step = dx[0].abs().max(dx[1].abs()).max(dx[2].abs());
            if step < 1e-14 * self.scale && dx[3].abs() < 1e-15 {
                break;
            }
        }
        let k = self.leg.knot_at(v[3]);
        let p1 = k.eval(v[0]).xy();
        res = res.min((p1 - k.eval(v[1]).xy()).norm().max((p1 - k.eval(v[2]).xy()).norm()));
        let inside = v[3] >= a.u - 0.05 * width && v[3] <= b.u + 0.05 * width;
        if !inside || !(v[0] < v[1] && v[1] < v[2]) || res > self.root_tol() || cond > 1e12 {
            return Err(Fail::Triple(v[3]));
        }
        let u = v[3].clamp(a.u, b.u);
        let (t1, t2, t3) = (v[0], v[1], v[2]);
        let z12 = xa.lo_above;
        let z13 = ya.lo_above;
        let z23 = za.lo_above;
        let w = (u - a.u) / width;
        let mut configs = Vec::new();
        let mut mult_i = 0;
        if !z13 && !z23 {
            for (qi, &(i2, j2)) in pairs.iter().enumerate() {
                if tri.crossings.contains(&qi) {
                    continue;
                }
                let (ka, kb) = (&a.cs[i2], &b.cs[j2]);
                if ka.lo_above && ka.lo < xa.lo && xa.hi < ka.hi && ka.hi < ya.hi {
                    let al = ka.lo + w * (kb.lo - ka.lo);
                    let dh = ka.hi + w * (kb.hi - ka.hi);
                    configs.push(Configuration { condition: 1, points: vec![al, t1, t2, dh, t3] });
                    mult_i += 1;
                }
            }
        }
        let mut mult_iii = 0;
        if z12 && !z13 {
            let f1 = k.deriv(t1).xy();
            let f2 = k.deriv(t2).xy();
            match cone_contains_right(f1, f2) {
                None => return Err(Fail::Cone(u)),
                Some(false) => {
                    mult_iii = 1;
                    configs.push(Configuration { condition: 3, points: vec![t1, t2, t3] });
                }
                Some(true) => {}
            }
        }
        Ok(EventRecord {
            s: u,
            leg: 0,
            u,
            phase: self.leg.phase,
            drag: self.leg.drag,
            kind: EventKind::TriplePoint,
            witness: vec![t1, t2, t3],
            mult_i,
            mult_ii: 0,
            mult_iii,
            configurations: configs,
            residual: res / self.scale,
            condition: cond,
            bead: self.leg.bead_window(u),
            fringe: false,
        })
    }
}

/// Whether `(1, 0)` lies in the closed cone positively spanned by `a` and
/// `b`; `None` when it is within rounding of the boundary.
pub fn cone_contains_right(a: Vec2, b: Vec2) -> Option<bool> {
    let an = a.normalized();
    let bn = b.normalized();
    let r = Vec2::new(1.0, 0.0);
    let den = an.cross(bn);
    if den.abs() < 1e-12 {
        // parallel directions: the cone is a ray or a half-plane
        let on_a = an.x > 0.0 && an.y.abs() < 1e-9;
        return if an.dot(bn) > 0.0 { Some(on_a) } else { None };
    }
    let alpha = r.cross(bn) / den;
    let beta = an.cross(r) / den;
    if alpha.abs() < 1e-9 || beta.abs() < 1e-9 {
        return None;
    }
    Some(alpha > 0.0 && beta > 0.0)
}

enum Verdict {
    Done,
    Split,
}

struct Matching {
    pairs: Vec<(usize, usize)>,
    /// Crossings of the left sample with no partner (deaths).
    lost: Vec<usize>,
    /// Crossings of the right sample with no partner (births).
    born: Vec<usize>,
}

impl Matching {
    /// A lost and a born crossing of the same kind may be one crossing that
    /// moved too far to be recognised.
    fn ambiguous(&self, a: &Sample, b: &Sample) -> bool {
        self.lost.iter().any(|&i| {
            self.born.iter().any(|&j| a.cs[i].sign == b.cs[j].sign && a.cs[i].lo_above == b.cs[j].lo_above)
        })
    }

    fn clean(&self) -> bool {
        self.lost.is_empty() && self.born.is_empty()
    }
}

/// Whether turning from `p` to `q` the short way passes the direction to
/// the right.
fn sweeps_right(p: Vec2, q: Vec2) -> bool {
    let a0 = atan2(p.y, p.x);
    let a1 = a0 + atan2(p.x * q.y - p.y * q.x, p.dot(q));
    let (lo, hi) = if a0 < a1 { (a0, a1) } else { (a1, a0) };
    [-TAU, 0.0, TAU].iter().any(|&r| lo < r && r < hi)
}

/// Distance of two crossings in intrinsic coordinates; infinite when an
/// endpoint lies on different members.
fn end_distance(p: [(Member, f64); 2], q: [(Member, f64); 2]) -> f64 {
    let d = |a: (Member, f64), b: (Member, f64)| if a.0 == b.0 { (a.1 - b.1).abs() } else { f64::INFINITY };
    d(p[0], q[0]).max(d(p[1], q[1]))
}

/// How far a matched crossing moved in intrinsic coordinates. An endpoint
/// passing the bead window edge changes member; it is located by the
/// continuation alone.
fn move_distance(p: [(Member, f64); 2], q: [(Member, f64); 2]) -> f64 {
    let d = |a: (Member, f64), b: (Member, f64)| if a.0 == b.0 { (a.1 - b.1).abs() } else { 0.0 };
    d(p[0], q[0]).max(d(p[1], q[1]))
}

fn separations(ends: &[[(Member, f64); 2]]) -> Vec<f64> {
    let mut sep = vec![f64::INFINITY; ends.len()];
    for i in 0..ends.len() {
        for j in i + 1..ends.len() {
            let d = end_distance(ends[i], ends[j]);
            sep[i] = sep[i].min(d);
            sep[j] = sep[j].min(d);
        }
    }
    sep
}

/// An endpoint: value at both samples, pair index, and whether it is the
/// upper end of its crossing.
#[derive(Clone, Copy, Debug)]
struct End {
    va: f64,
    vb: f64,
    pair: usize,
    hi: bool,
}

fn inversions(a: &Sample, b: &Sample, pairs: &[(usize, usize)]) -> Vec<(End, End)> {
    let mut ends: Vec<End> = Vec::with_capacity(2 * pairs.len());
    for (pi, &(i, j)) in pairs.iter().enumerate() {
        ends.push(End { va: a.cs[i].lo, vb: b.cs[j].lo, pair: pi, hi: false });
        ends.push(End { va: a.cs[i].hi, vb: b.cs[j].hi, pair: pi, hi: true });
    }
    ends.sort_by(|x, y| x.va.total_cmp(&y.va));
    let mut out = Vec::new();
    for p in 0..ends.len() {
        for q in p + 1..ends.len() {
            if ends[p].vb > ends[q].vb {
                out.push((ends[p], ends[q]));
            }
        }
    }
    out
}

struct Triangle {
    /// Pair indices of the crossings `(t1,t2)`, `(t1,t3)`, `(t2,t3)`.
    crossings: [usize; 3],
}

fn triangle_of(a: &Sample, pairs: &[(usize, usize)], inv: &[(End, End)]) -> Option<Triangle> {
    if inv.len() != 3 {
        return None;
    }
    // each swap glues two endpoints into one curve point of the triple
    let mut groups: Vec<[(usize, bool); 2]> = inv.iter().map(|(p, q)| [(p.pair, p.hi), (q.pair, q.hi)]).collect();
    let mut seen: Vec<(usize, bool)> = groups.iter().flatten().copied().collect();
    seen.sort();
    seen.dedup();
    if seen.len() != 6 {
        return None;
    }
    let value = |e: (usize, bool)| {
        let c = &a.cs[pairs[e.0].0];
        if e.1 { c.hi } else { c.lo }
    };
    groups.sort_by(|g, h| (value(g[0]) + value(g[1])).total_cmp(&(value(h[0]) + value(h[1]))));
    let slot = |e: (usize, bool)| groups.iter().position(|g| g.contains(&e)).unwrap();
    let mut ids: Vec<usize> = seen.iter().map(|e| e.0).collect();
    ids.dedup();
    if ids.len() != 3 {
        return None;
    }
    let mut by_slots = [usize::MAX; 3];
    for &c in &ids {
        let (l, h) = (slot((c, false)), slot((c, true)));
        let which = match (l, h) {
            (0, 1) => 0,
            (0, 2) => 1,
            (1, 2) => 2,
            _ => return None,
        };
        if by_slots[which] != usize::MAX {
            return None;
        }
        by_slots[which] = c;
    }
    Some(Triangle { crossings: by_slots })
}

/// Gaussian elimination with partial pivoting on the augmented 4×5 system.
/// Returns the solution and the ratio of the largest to smallest pivot.
fn solve4(m: &mut [[f64; 5]; 4]) -> Option<([f64; 4], f64)> {
    let mut pmax: f64 = 0.0;
    let mut pmin = f64::INFINITY;
    for c in 0..4 {
        let r = (c..4).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        m.swap(c, r);
        let p = m[c][c];
        if p == 0.0 || !p.is_finite() {
            return None;
        }
        pmax = pmax.max(p.abs());
        pmin = pmin.min(p.abs());
        for i in c + 1..4 {
            let f = m[i][c] / p;
            for j in c..5 {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    let mut x = [0.0; 4];
    for c in (0..4).rev() {
        let mut s = m[c][4];
        for j in c + 1..4 {
            s -= m[c][j] * x[j];
        }
        x[c] = s / m[c][c];
    }
    Some((x, pmax / pmin))
}

fn leg_scale(leg: &Leg) -> f64 {
    leg.knot_at(0.0).diameter().max(leg.knot_at(1.0).diameter()).max(1.0)
}

fn leg_samples(cycle: &Cycle, leg: usize, cfg: &SweepConfig) -> usize {
    let w = cycle.legs[leg].weight / cycle.total_weight();
    (floor(cfg.samples as f64 * w + 0.5) as usize).max(8)
}

fn run_leg(leg: &Leg, n: usize, cfg: &SweepConfig) -> core::result::Result<Partial, Fail> {
    let ctx = Ctx { leg, cfg, scale: leg_scale(leg) };
    let us: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let samples: Vec<Sample> = map_maybe_parallel(&us, |&u| ctx.sample(u));
    let idx: Vec<usize> = (0..n).collect();
    let parts: Vec<core::result::Result<Partial, Fail>> = map_maybe_parallel(&idx, |&i| {
        let mut p = Partial::default();
        ctx.process(&samples[i], &samples[i + 1], &mut p).map(|_| p)
    });
    let mut total = Partial { diagrams: samples.len(), ..Partial::default() };
    for p in parts {
        let p = p?;
        total.events.extend(p.events);
        total.births += p.births;
        total.deaths += p.deaths;
        total.diagrams += p.diagrams;
    }
    Ok(total)
}

#[cfg(feature = "parallel")]
fn map_maybe_parallel<T: Sync, R: Send>(xs: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    xs.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_maybe_parallel<T, R>(xs: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    xs.iter().map(f).collect()
}

/// Sweep an already built cycle once (no perturbation retries).
pub fn evaluate_cycle(cycle: &Cycle, cfg: &SweepConfig) -> Result<CocycleValue> {
    #[cfg(feature = "parallel")]
    if cfg.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Nongeneric(alloc::format!("thread pool: {e}")))?;
        return pool.install(|| evaluate_serial_legs(cycle, cfg));
    }
    evaluate_serial_legs(cycle, cfg)
}

fn evaluate_serial_legs(cycle: &Cycle, cfg: &SweepConfig) -> Result<CocycleValue> {
    let mut events = Vec::new();
    let (mut births, mut deaths, mut diagrams) = (0, 0, 0);
    for (li, leg) in cycle.legs.iter().enumerate() {
        let n = leg_samples(cycle, li, cfg);
        let p = run_leg(leg, n, cfg).map_err(|f| match f {
            Fail::Triple(u) => Error::DegenerateTriple { s: cycle.global(li, u) },
            Fail::Tangent(u) => Error::DegenerateTangent { s: cycle.global(li, u) },
            Fail::Cone(u) => Error::ConeBoundary { s: cycle.global(li, u) },
            Fail::Unresolved(u) => {
                Error::Nongeneric(alloc::format!("unresolved diagram at s = {}", cycle.global(li, u)))
            }
        })?;
        for mut e in p.events {
            e.leg = li;
            e.s = cycle.global(li, e.u);
            events.push(e);
        }
        births += p.births;
        deaths += p.deaths;
        diagrams += p.diagrams;
    }
    events.sort_by(|x, y| x.s.total_cmp(&y.s).then_with(|| cmp_witness(&x.witness, &y.witness)));
    let dedup = cfg.dedup;
    // A pair living in a single sample is seen both as born and as dying
    // there; those two records cancel and must both stay.
    let same = |x: &EventRecord, y: &EventRecord, ds: f64| {
        !x.fringe
            && !y.fringe
            && x.kind == y.kind
            && ds <= dedup
            && x.witness.len() == y.witness.len()
            && x.witness.iter().zip(&y.witness).all(|(p, q)| (p - q).abs() <= 1e-9)
    };
    events.dedup_by(|x, y| same(x, y, (x.s - y.s).abs()));
    // the loop closes up: s = 1 is s = 0
    if events.len() > 1 && same(&events[0], &events[events.len() - 1], events[0].s + 1.0 - events[events.len() - 1].s) {
        events.pop();
    }
    Ok(CocycleValue::from_events(events, births, deaths, diagrams))
}

fn cmp_witness(a: &[f64], b: &[f64]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.total_cmp(y);
        if c != core::cmp::Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

fn is_genericity_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::DegenerateTriple { .. } | Error::DegenerateTangent { .. } | Error::ConeBoundary { .. } | Error::Nongeneric(_)
    )
}

/// Seed of the `attempt`-th retry perturbation.
pub fn retry_seed(cfg: &SweepConfig, attempt: u32) -> u64 {
    cfg.seed.unwrap_or(0x5eed).wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(attempt as u64))
}

/// The mod-2 value of the cocycle on the cycle built from `recipe`.
///
/// Genericity failures rebuild the cycle with a fresh seeded perturbation,
/// at most `cfg.retries` times.
pub fn cocycle_value_mod2(recipe: &CycleRecipe, cfg: &SweepConfig) -> Result<CocycleValue> {
    let mut last = String::new();
    for attempt in 0..=cfg.retries {
        let cycle = match (attempt, cfg.seed) {
            (0, None) => recipe.build(&cfg.tol)?,
            (0, Some(seed)) => recipe.build_perturbed(&cfg.tol, seed, cfg.perturbation)?,
            _ => recipe.build_perturbed(&cfg.tol, retry_seed(cfg, attempt), cfg.perturbation)?,
        };
        match evaluate_cycle(&cycle, cfg) {
            Ok(mut v) => {
                v.retries = attempt;
                return Ok(v);
            }
            Err(e) if is_genericity_failure(&e) => last = alloc::format!("{e}"),
            Err(e) => return Err(e),
        }
    }
    Err(Error::NongenericPersistent { retries: cfg.retries, last })
}

/// Event count mod 2 along a path (a drag, or any cycle's legs).
pub fn path_count_mod2(recipe: &CycleRecipe, cfg: &SweepConfig) -> Result<u8> {
    cocycle_value_mod2(recipe, cfg).map(|v| v.parity)
}

pub fn find_triple_points(cycle: &Cycle, cfg: &SweepConfig) -> Result<Vec<EventRecord>> {
    Ok(evaluate_cycle(cycle, cfg)?.events.into_iter().filter(|e| e.kind == EventKind::TriplePoint).collect())
}

pub fn find_right_tangent_events(cycle: &Cycle, cfg: &SweepConfig) -> Result<Vec<EventRecord>> {
    Ok(evaluate_cycle(cycle, cfg)?.events.into_iter().filter(|e| e.kind == EventKind::RightTangent).collect())
}

/// Crossing counts along the grid of each leg, with the births and
/// deaths found between them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CrossingTrack {
    pub s: Vec<f64>,
    pub counts: Vec<usize>,
    pub births: usize,
    pub deaths: usize,
}

pub fn track_crossings(cycle: &Cycle, cfg: &SweepConfig) -> Result<CrossingTrack> {
    let mut tr = CrossingTrack::default();
    for (li, leg) in cycle.legs.iter().enumerate() {
        let n = leg_samples(cycle, li, cfg);
        let ctx = Ctx { leg, cfg, scale: leg_scale(leg) };
        let mut prev: Option<Sample> = None;
        for i in 0..=n {
            let u = i as f64 / n as f64;
            let smp = ctx.sample(u);
            tr.s.push(cycle.global(li, u));
            tr.counts.push(smp.cs.len());
            if let Some(p) = &prev {
                let mut part = Partial::default();
                ctx.process(p, &smp, &mut part).map_err(|_| Error::Nongeneric("crossing track".into()))?;
                tr.births += part.births;
                tr.deaths += part.deaths;
            }
            prev = Some(smp);
        }
    }
    Ok(tr)
}

/// Condition (ii) multiplicity of a right-tangent event at crossing
/// `(b, d)` of the given diagram.
pub fn evaluate_condition_ii(crossings: &[Crossing], b: f64, d: f64) -> u32 {
    crossings
        .iter()
        .filter(|c| c.lo_above && c.lo < b && b < c.hi && c.hi < d)
        .count() as u32
}

/// Condition (i) multiplicity of a triple point `t1 < t2 < t3` with the
/// given heights, counting crossings of the diagram other than the three
/// at the triple point.
pub fn evaluate_condition_i(crossings: &[Crossing], t: [f64; 3], z: [f64; 3]) -> u32 {
    if !(z[2] > z[0] && z[2] > z[1]) {
        return 0;
    }
    crossings
        .iter()
        .filter(|c| c.lo_above && c.lo < t[0] && t[1] < c.hi && c.hi < t[2])
        .count() as u32
}

/// Condition (iii): heights `z(t2) < z(t1) < z(t3)` and the cone of the
/// projected tangents at `t1`, `t2` misses the rightward direction.
pub fn evaluate_condition_iii(z: [f64; 3], d1: Vec3, d2: Vec3) -> Option<u32> {
    if !(z[1] < z[0] && z[0] < z[2]) {
        return Some(0);
    }
    cone_contains_right(d1.xy(), d2.xy()).map(|c| if c { 0 } else { 1 })
}
