//! Plane diagrams: crossings of the vertical projection, writhe and the
//! Gauss diagram.

use alloc::vec::Vec;

use crate::curve::LongKnot;
use crate::math::{Vec2, Vec3};
use crate::tolerance::ToleranceSet;

/// A double point of the projection with parameters `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub lo: f64,
    pub hi: f64,
    /// Whether the point at `lo` is above the point at `hi`.
    pub lo_above: bool,
    /// `sgn(T_over × T_under)` of the projected tangents.
    pub sign: i8,
    pub point: Vec2,
    /// `|sin|` of the angle between the projected tangents.
    pub transversality: f64,
    /// `|z(lo) - z(hi)|`.
    pub gap: f64,
}

impl Crossing {
    pub fn over(&self) -> f64 {
        if self.lo_above { self.lo } else { self.hi }
    }

    pub fn under(&self) -> f64 {
        if self.lo_above { self.hi } else { self.lo }
    }
}

/// Build the crossing record for a pair of parameters with equal
/// projections.
pub fn crossing_at(k: &LongKnot, t1: f64, t2: f64) -> Crossing {
    let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
    let a = k.jet(lo);
    let b = k.jet(hi);
    let lo_above = a.p.z > b.p.z;
    let (over, under) = if lo_above { (a.d1, b.d1) } else { (b.d1, a.d1) };
    let c = over.xy().cross(under.xy());
    let s = c / (over.xy().norm() * under.xy().norm()).max(1e-300);
    Crossing {
        lo,
        hi,
        lo_above,
        sign: if c >= 0.0 { 1 } else { -1 },
        point: a.p.xy(),
        transversality: s.abs(),
        gap: (a.p.z - b.p.z).abs(),
    }
}

/// Newton's method for `f_xy(t1) = f_xy(t2)` from a guess. Returns the
/// refined pair if it converges to an off-diagonal solution.
pub fn refine_crossing(k: &LongKnot, t1: f64, t2: f64, tol: f64) -> Option<(f64, f64)> {
    let (mut a, mut b) = (t1, t2);
    let scale = (t1 - t2).abs();
    for _ in 0..40 {
        let ja = k.jet(a);
        let jb = k.jet(b);
        let f = ja.p.xy() - jb.p.xy();
        let da = ja.d1.xy();
        let db = jb.d1.xy();
        // J = [da, -db]
        let det = -da.x * db.y + db.x * da.y;
        if det.abs() < 1e-300 {
            return None;
        }
        let sa = (-f.x * db.y + db.x * f.y) / det;
        let sb = (da.x * f.y - da.y * f.x) / det;
        a -= sa;
        b -= sb;
        if !a.is_finite() || !b.is_finite() {
            return None;
        }
        if sa.abs() + sb.abs() < 1e-15 * (1.0 + a.abs() + b.abs()) || f.norm() < 1e-15 * tol {
            break;
        }
    }
    let r = (k.eval(a).xy() - k.eval(b).xy()).norm();
    if r > tol || (a - b).abs() < 1e-6 * scale.max(tol) {
        return None;
    }
    Some((a, b))
}

#[derive(Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    pa: Vec2,
    pb: Vec2,
    lo: Vec2,
    hi: Vec2,
    turn: f64,
}

fn angle_between(u: Vec2, v: Vec2) -> f64 {
    let c = u.dot(v);
    let s = u.cross(v);
    crate::math::atan2(s.abs(), c)
}

fn piece(k: &LongKnot, a: f64, b: f64) -> Piece {
    let m = 0.5 * (a + b);
    let ja = k.jet(a);
    let jm = k.jet(m);
    let jb = k.jet(b);
    let (pa, pm, pb) = (ja.p.xy(), jm.p.xy(), jb.p.xy());
    let dd = ja.d2.xy().norm().max(jm.d2.xy().norm()).max(jb.d2.xy().norm());
    let dt = b - a;
    let infl = 0.19 * dt * dt * dd + 1e-13 * (1.0 + pa.norm());
    let lo = Vec2::new(pa.x.min(pm.x).min(pb.x) - infl, pa.y.min(pm.y).min(pb.y) - infl);
    let hi = Vec2::new(pa.x.max(pm.x).max(pb.x) + infl, pa.y.max(pm.y).max(pb.y) + infl);
    let (ta, tm, tb) = (ja.d1.xy(), jm.d1.xy(), jb.d1.xy());
    let turn = if ta.norm() == 0.0 || tm.norm() == 0.0 || tb.norm() == 0.0 {
        f64::INFINITY
    } else {
        angle_between(ta, tm) + angle_between(tm, tb)
    };
    Piece { a, b, pa, pb, lo, hi, turn }
}

fn boxes_meet(p: &Piece, q: &Piece) -> bool {
    p.lo.x <= q.hi.x && q.lo.x <= p.hi.x && p.lo.y <= q.hi.y && q.lo.y <= p.hi.y
}

struct Search<'a> {
    k: &'a LongKnot,
    tol: f64,
    out: Vec<(f64, f64)>,
    unresolved: usize,
    budget: usize,
    /// Loops shorter than this in parameter are ignored.
    min_loop: f64,
}

/// Piece pairs a search may visit before giving up on the diagram.
const SEARCH_BUDGET: usize = 2_000_000;

impl Search<'_> {
    fn pair(&mut self, p: &Piece, q: &Piece, depth: u32) {
        if !boxes_meet(p, q) {
            return;
        }
        if self.budget == 0 {
            self.unresolved += 1;
            return;
        }
        self.budget -= 1;
        if p.b.max(q.b) - p.a.min(q.a) < self.min_loop {
            return;
        }
        let adjacent = p.b == q.a;
        if adjacent && p.turn + q.turn < 0.5 * crate::math::PI {
            return;
        }
        let flat = p.turn < 0.35 && q.turn < 0.35;
        if flat && !adjacent {
            let u = p.pb - p.pa;
            let v = q.pb - q.pa;
            let sin_beta = (u.cross(v) / (u.norm() * v.norm()).max(1e-300)).abs();
            if sin_beta > 2.0 * crate::math::sin(p.turn + q.turn) + 1e-9 {
                let w = q.pa - p.pa;
                let den = u.cross(v);
                let s = w.cross(v) / den;
                let r = w.cross(u) / den;
                // a piece strays from its chord by at most its sagitta, which
                // moves the meeting point along the other chord by sagitta / sin
                let ds = 0.05 + 0.5 * sagitta(q, v) / (sin_beta * u.norm());
                let dr = 0.05 + 0.5 * sagitta(p, u) / (sin_beta * v.norm());
                if s < -ds || s > 1.0 + ds || r < -dr || r > 1.0 + dr {
                    return;
                }
                let g1 = p.a + s.clamp(0.0, 1.0) * (p.b - p.a);
                let g2 = q.a + r.clamp(0.0, 1.0) * (q.b - q.a);
                // roots just past a piece end are kept; neighbours find them
                // too and the duplicates are merged below
                let e1 = 1e-6 * (p.b - p.a);
                let e2 = 1e-6 * (q.b - q.a);
                if let Some((t1, t2)) = refine_crossing(self.k, g1, g2, self.tol) {
                    if t1 >= p.a - e1 && t1 <= p.b + e1 && t2 >= q.a - e2 && t2 <= q.b + e2 {
                        self.out.push((t1, t2));
                        return;
                    }
                }
                // chords may meet but Newton failed or left the pieces; look closer
            }
        }
        if depth >= 48 {
            self.unresolved += 1;
            return;
        }
        let (p1, p2) = split(self.k, p);
        let (q1, q2) = split(self.k, q);
        self.pair(&p1, &q1, depth + 1);
        self.pair(&p1, &q2, depth + 1);
        self.pair(&p2, &q1, depth + 1);
        self.pair(&p2, &q2, depth + 1);
    }
}

/// Twice the largest distance of a piece from its chord `c`.
fn sagitta(p: &Piece, c: Vec2) -> f64 {
    c.norm() * crate::math::tan(p.turn.min(1.0))
}

fn split(k: &LongKnot, p: &Piece) -> (Piece, Piece) {
    let m = 0.5 * (p.a + p.b);
    (piece(k, p.a, m), piece(k, m, p.b))
}

/// Result of a crossing search.
#[derive(Clone, Debug, Default)]
pub struct CrossingSet {
    pub crossings: Vec<Crossing>,
    /// Pairs of curve pieces the search could not separate or resolve;
    /// nonzero only for degenerate projections (tangencies, cusps).
    pub unresolved: usize,
}

/// Sorted crossing list of the projection, with the unresolved count.
pub fn crossing_search(k: &LongKnot, tol: &ToleranceSet) -> CrossingSet {
    if k.is_straight() {
        return CrossingSet::default();
    }
    let scale = k.diameter();
    crossing_search_scaled(k, tol, scale)
}

pub fn crossing_search_scaled(k: &LongKnot, tol: &ToleranceSet, scale: f64) -> CrossingSet {
    let bps = k.breakpoints();
    let mut pieces: Vec<Piece> = bps.windows(2).map(|w| piece(k, w[0], w[1])).collect();
    // keep pieces reasonably flat so most pairs resolve immediately
    let mut i = 0;
    while i < pieces.len() {
        if pieces[i].turn > 0.3 && pieces[i].b - pieces[i].a > 1e-9 * scale {
            let (l, r) = split(k, &pieces[i]);
            pieces[i] = l;
            pieces.insert(i + 1, r);
        } else {
            i += 1;
        }
    }
    let mut search = Search { k, tol: tol.root * scale, out: Vec::new(), unresolved: 0, budget: SEARCH_BUDGET, min_loop: tol.dedup * scale };
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| pieces[a].lo.x.total_cmp(&pieces[b].lo.x));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let x = pieces[i].lo.x;
        active.retain(|&j| pieces[j].hi.x >= x);
        for &j in &active {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            let (pa, pb) = (pieces[a], pieces[b]);
            search.pair(&pa, &pb, 0);
        }
        active.push(i);
    }
    let dedup = tol.dedup * scale;
    let mut pairs = search.out;
    for p in &mut pairs {
        if p.0 > p.1 {
            *p = (p.1, p.0);
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut crossings: Vec<Crossing> = Vec::with_capacity(pairs.len());
    for (t1, t2) in pairs {
        let dup = crossings
            .iter()
            .rev()
            .take_while(|c| t1 - c.lo <= dedup)
            .any(|c| (c.hi - t2).abs() <= dedup);
        if !dup && t2 - t1 >= search.min_loop {
            crossings.push(crossing_at(k, t1, t2));
        }
    }
    CrossingSet { crossings, unresolved: search.unresolved }
}

/// The crossings of the projection of `k`, ordered by their smaller
/// parameter.
pub fn compute_crossings(k: &LongKnot, tol: &ToleranceSet) -> Vec<Crossing> {
    crossing_search(k, tol).crossings
}

pub fn writhe(crossings: &[Crossing]) -> i32 {
    crossings.iter().map(|c| c.sign as i32).sum()
}

/// A chord of the Gauss diagram, oriented from the upper point to the
/// lower one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arrow {
    pub from: f64,
    pub to: f64,
    pub sign: i8,
}

/// Gauss diagram: one arrow per crossing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GaussDiagram {
    pub arrows: Vec<Arrow>,
}

/// Endpoint of an arrow in parameter order: arrow index (by order of first
/// endpoint), whether it is the upper point, and the sign.
pub type GaussLetter = (usize, bool, i8);

impl GaussDiagram {
    pub fn from_crossings(crossings: &[Crossing]) -> Self {
        let arrows = crossings
            .iter()
            .map(|c| Arrow { from: c.over(), to: c.under(), sign: c.sign })
            .collect();
        Self { arrows }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// The combinatorial word of the diagram: parameters forgotten,
    /// arrows relabelled in order of first appearance. Two knots have the
    /// same word exactly when their Gauss diagrams are isomorphic.
    pub fn word(&self) -> Vec<GaussLetter> {
        let mut ends: Vec<(f64, usize, bool)> = Vec::with_capacity(2 * self.arrows.len());
        for (i, a) in self.arrows.iter().enumerate() {
            ends.push((a.from, i, true));
            ends.push((a.to, i, false));
        }
        ends.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut label = alloc::vec![usize::MAX; self.arrows.len()];
        let mut next = 0;
        ends.iter()
            .map(|&(_, i, up)| {
                if label[i] == usize::MAX {
                    label[i] = next;
                    next += 1;
                }
                (label[i], up, self.arrows[i].sign)
            })
            .collect()
    }
}

pub fn gauss_diagram(k: &LongKnot, tol: &ToleranceSet) -> GaussDiagram {
    GaussDiagram::from_crossings(&compute_crossings(k, tol))
}

/// Projected point, used by diagram renderers.
pub fn project(p: Vec3) -> Vec2 {
    p.xy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_catalog_knot;

    /// Brute force: all pairs of a fine polyline whose segments properly
    /// intersect.
    fn polyline_crossings(k: &LongKnot, n: usize) -> Vec<(f64, f64, bool)> {
        let (a, b) = k.support();
        let ts: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        let ps: Vec<Vec3> = ts.iter().map(|&t| k.eval(t)).collect();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 2..n {
                let (p, q) = (ps[i].xy(), ps[i + 1].xy());
                let (r, s) = (ps[j].xy(), ps[j + 1].xy());
                let u = q - p;
                let v = s - r;
                let den = u.cross(v);
                if den == 0.0 {
                    continue;
                }
                let w = r - p;
                let x = w.cross(v) / den;
                let y = w.cross(u) / den;
                if (0.0..1.0).contains(&x) && (0.0..1.0).contains(&y) {
                    let z1 = ps[i].z + x * (ps[i + 1].z - ps[i].z);
                    let z2 = ps[j].z + y * (ps[j + 1].z - ps[j].z);
                    out.push((ts[i] + x * (ts[i + 1] - ts[i]), ts[j] + y * (ts[j + 1] - ts[j]), z1 > z2));
                }
            }
        }
        out
    }

    #[test]
    fn matches_polyline_oracle() {
        for name in ["trefoil", "figure-eight", "kink+", "trefoil-mirror"] {
            let k = make_catalog_knot(name).unwrap();
            let fast = compute_crossings(&k, &ToleranceSet::default());
            let slow = polyline_crossings(&k, 6000);
            assert_eq!(fast.len(), slow.len(), "{name}");
            for (c, s) in fast.iter().zip(&slow) {
                assert!((c.lo - s.0).abs() < 1e-3 && (c.hi - s.1).abs() < 1e-3, "{name}");
                assert_eq!(c.lo_above, s.2);
            }
        }
    }

    #[test]
    fn catalog_writhes() {
        let tol = ToleranceSet::default();
        let w = |n: &str| writhe(&compute_crossings(&make_catalog_knot(n).unwrap(), &tol));
        assert_eq!(w("unknot"), 0);
        assert_eq!(w("trefoil"), 3);
        assert_eq!(w("trefoil-mirror"), -3);
        assert_eq!(w("figure-eight"), 0);
        assert_eq!(w("kink+"), 1);
        assert_eq!(w("kink-"), -1);
    }

    #[test]
    fn standard_positive_crossing_sign() {
        // over strand along (1,-1), under along (1,1).
        let c = crate::math::Vec2::new(1.0, -1.0).cross(crate::math::Vec2::new(1.0, 1.0));
        assert!(c > 0.0);
    }

    #[test]
    fn composition_concatenates_words() {
        let tol = ToleranceSet::default();
        let t = make_catalog_knot("trefoil").unwrap();
        let u = make_catalog_knot("unknot").unwrap();
        let a = gauss_diagram(&t, &tol).word();
        let b = gauss_diagram(&LongKnot::concat(&t, &u), &tol).word();
        let c = gauss_diagram(&LongKnot::concat(&u, &t), &tol).word();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let tt = gauss_diagram(&make_catalog_knot("trefoil#trefoil").unwrap(), &tol);
        assert_eq!(tt.len(), 6);
    }

    #[test]
    fn rotation_by_pi_mirrors_in_projection() {
        // rotating by π about the axis flips the diagram over: the crossing
        // count is unchanged.
        let tol = ToleranceSet::default();
        let k = make_catalog_knot("figure-eight").unwrap();
        let r = k.rotate_about_axis(crate::math::PI);
        assert_eq!(compute_crossings(&r, &tol).len(), compute_crossings(&k, &tol).len());
    }
}
