//! Genericity of a single knot's diagram.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::curve::LongKnot;
use crate::diagram::{crossing_search, CrossingSet};
use crate::math::Vec3;
use crate::tolerance::ToleranceSet;

/// Smallest `|sin|` of a crossing angle accepted as transverse.
pub const MIN_TRANSVERSALITY: f64 = 1e-5;
/// Smallest ratio `|f'_xy| / |f'|` accepted (no vertical tangents).
pub const MIN_PROJECTED_SPEED: f64 = 1e-6;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GenericityReport {
    pub generic: bool,
    pub crossing_count: usize,
    pub min_transversality: f64,
    pub min_gap: f64,
    pub min_endpoint_separation: f64,
    pub min_projected_speed: f64,
    pub issues: Vec<String>,
}

/// Check that the diagram is regular: transverse double points only, with
/// distinct heights, no triple points, no vertical tangents, and exact
/// tails.
pub fn validate_generic(k: &LongKnot, tol: &ToleranceSet) -> GenericityReport {
    let scale = k.diameter();
    let set = crossing_search(k, tol);
    report_for(k, &set, tol, scale)
}

pub fn report_for(k: &LongKnot, set: &CrossingSet, tol: &ToleranceSet, scale: f64) -> GenericityReport {
    let mut issues = Vec::new();
    if set.unresolved > 0 {
        issues.push(format!("{} unresolved pieces in the crossing search", set.unresolved));
    }
    let cs = &set.crossings;
    let mut min_tr = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    for c in cs {
        min_tr = min_tr.min(c.transversality);
        min_gap = min_gap.min(c.gap);
        if c.transversality < MIN_TRANSVERSALITY {
            issues.push(format!("tangential double point at ({}, {})", c.lo, c.hi));
        }
        if c.gap <= tol.embed * scale {
            issues.push(format!("self-intersection at ({}, {})", c.lo, c.hi));
        }
    }
    let mut ends: Vec<f64> = cs.iter().flat_map(|c| [c.lo, c.hi]).collect();
    ends.sort_by(f64::total_cmp);
    let mut min_sep = f64::INFINITY;
    for w in ends.windows(2) {
        let d = w[1] - w[0];
        min_sep = min_sep.min(d);
        if d <= tol.dedup * scale {
            issues.push(format!("triple point near t = {}", w[0]));
        }
    }
    let mut min_speed = f64::INFINITY;
    for t in k.breakpoints() {
        let d = k.deriv(t);
        let r = d.xy().norm() / d.norm().max(1e-300);
        min_speed = min_speed.min(r);
    }
    if min_speed < MIN_PROJECTED_SPEED {
        issues.push(String::from("vertical tangent"));
    }
    let (a, b) = k.support();
    for t in [a - 1.0, b + 1.0] {
        if (k.eval(t) - Vec3::on_axis(t)).norm() > tol.tail * scale {
            issues.push(format!("tail deviates at t = {t}"));
        }
    }
    GenericityReport {
        generic: issues.is_empty(),
        crossing_count: cs.len(),
        min_transversality: min_tr,
        min_gap,
        min_endpoint_separation: min_sep,
        min_projected_speed: min_speed,
        issues,
    }
}
