//! Closed-form values of the cocycle on the standard loops, and the
//! classification of drag-path events into the six lines of the
//! multiplication-rule table.

use alloc::vec::Vec;

use crate::cycles::{Cycle, CycleDescriptor, CycleKind, Member};
use crate::diagram::{compute_crossings, writhe};
use crate::error::{Error, Result};
use crate::invariants::arf;
use crate::sweep::{CocycleValue, Configuration, EventRecord};
use crate::tolerance::ToleranceSet;

/// Predicted mod-2 value of the cocycle on the loop described by `desc`.
///
/// Rotation-type loops give `v2 mod 2` of the rotated knot; brackets and
/// self-drags of framing-trivialized knots give zero; framed drag loops
/// give `N1·v2(k2) + N2·v2(k1)` with `N` the writhes.
pub fn predicted_value(desc: &CycleDescriptor) -> Result<u8> {
    let v = |i: usize| desc.v2.get(i).copied().ok_or_else(incomplete);
    let n = |i: usize| desc.framing.get(i).copied().ok_or_else(incomplete);
    let bit = match desc.kind {
        CycleKind::Rotation | CycleKind::HatFlat | CycleKind::Primitivity => v(0)?,
        CycleKind::Bracket | CycleKind::SelfDrag => 0,
        CycleKind::FramedDragLoop => {
            let s = n(0)? as i64 * v(1)? as i64 + n(1)? as i64 * v(0)? as i64;
            s.rem_euclid(2) as u8
        }
        CycleKind::FramedSelfDrag => (n(0)? as i64 * v(0)? as i64).rem_euclid(2) as u8,
        CycleKind::DragPath => return Err(Error::UnknownKind("drag_path is not a loop".into())),
    };
    Ok(bit)
}

fn incomplete() -> Error {
    Error::InvalidKnot("cycle descriptor lacks constituent invariants".into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table1Line {
    I,
    II,
    III,
    IV,
    V,
    VI,
    Unclassified,
}

impl Table1Line {
    pub const ALL: [Table1Line; 7] = [
        Table1Line::I,
        Table1Line::II,
        Table1Line::III,
        Table1Line::IV,
        Table1Line::V,
        Table1Line::VI,
        Table1Line::Unclassified,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Table1Line::I => "I",
            Table1Line::II => "II",
            Table1Line::III => "III",
            Table1Line::IV => "IV",
            Table1Line::V => "V",
            Table1Line::VI => "VI",
            Table1Line::Unclassified => "UNCLASSIFIED",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// The line of a single counted configuration, from the condition it
/// satisfies and the B/S membership of its points in parameter order.
pub fn classify_configuration(cfg: &Configuration, membership: impl Fn(f64) -> Option<Member>) -> Table1Line {
    use Member::{B, S};
    let Some(pattern) = cfg.points.iter().map(|&t| membership(t)).collect::<Option<Vec<Member>>>() else {
        return Table1Line::Unclassified;
    };
    match (cfg.condition, pattern.as_slice()) {
        (1, [B, S, S, B, B]) => Table1Line::I,
        (1, [S, S, S, S, B]) => Table1Line::II,
        (2, [S, S, S, S]) => Table1Line::III,
        (2, [S, S, S, B]) => Table1Line::IV,
        (2, [B, S, B, B]) => Table1Line::V,
        (3, [S, S, B]) => Table1Line::VI,
        _ => Table1Line::Unclassified,
    }
}

/// Lines of all counted configurations of `ev`, using `membership` to
/// attribute parameters (typically the event's own bead window).
pub fn classify_event_table1(ev: &EventRecord, membership: impl Fn(f64) -> Option<Member>) -> Vec<Table1Line> {
    ev.configurations.iter().map(|c| classify_configuration(c, &membership)).collect()
}

/// Line counts over the drag-path events and the three identities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table1Check {
    /// Counts of lines I–VI, then UNCLASSIFIED.
    pub counts: [u64; 7],
    pub i_plus_v_even: bool,
    pub ii_iv_vi_even: bool,
    /// Line III count mod 2 equals `writhe(B)·Arf(S)` mod 2.
    pub iii_matches: bool,
    pub expected_iii: u8,
}

impl Table1Check {
    pub fn count(&self, line: Table1Line) -> u64 {
        self.counts[line.index()]
    }

    pub fn all_hold(&self) -> bool {
        self.i_plus_v_even && self.ii_iv_vi_even && self.iii_matches && self.count(Table1Line::Unclassified) == 0
    }
}

pub fn table1_histogram<'a>(events: impl IntoIterator<Item = &'a EventRecord>) -> [u64; 7] {
    let mut counts = [0u64; 7];
    for ev in events {
        for line in classify_event_table1(ev, |t| ev.membership(t)) {
            counts[line.index()] += 1;
        }
    }
    counts
}

/// Check the identities on the events of one drag path with host writhe
/// `writhe_b` and bead Arf invariant `arf_s`.
pub fn verify_table1_identities<'a>(
    events: impl IntoIterator<Item = &'a EventRecord>,
    writhe_b: i32,
    arf_s: u8,
) -> Table1Check {
    let counts = table1_histogram(events);
    let c = |l: Table1Line| counts[l.index()];
    let expected_iii = ((writhe_b.rem_euclid(2) as u8) * arf_s) % 2;
    Table1Check {
        counts,
        i_plus_v_even: (c(Table1Line::I) + c(Table1Line::V)) % 2 == 0,
        ii_iv_vi_even: (c(Table1Line::II) + c(Table1Line::IV) + c(Table1Line::VI)) % 2 == 0,
        iii_matches: (c(Table1Line::III) % 2) as u8 == expected_iii,
        expected_iii,
    }
}

/// One drag path of a cycle with its identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct DragCheck {
    pub drag: usize,
    pub host: alloc::string::String,
    pub bead: alloc::string::String,
    pub writhe_b: i32,
    pub arf_s: u8,
    pub check: Table1Check,
}

/// Identity checks on every drag path of `cycle`, using the events of a
/// sweep of it (or of a perturbed copy).
pub fn drag_checks(cycle: &Cycle, value: &CocycleValue, tol: &ToleranceSet) -> Vec<DragCheck> {
    (0..cycle.drags)
        .filter_map(|d| {
            let (b, s) = cycle.drag_members(d)?;
            let writhe_b = writhe(&compute_crossings(b, tol));
            let arf_s = arf(s, tol);
            let check = verify_table1_identities(value.events.iter().filter(|e| e.drag == Some(d)), writhe_b, arf_s);
            Some(DragCheck { drag: d, host: b.name().into(), bead: s.name().into(), writhe_b, arf_s, check })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn desc(kind: CycleKind, framing: Vec<i32>, v2: Vec<u8>) -> CycleDescriptor {
        CycleDescriptor { kind, knots: vec!["k".to_string(); v2.len()], framing, v2 }
    }

    #[test]
    fn predictions() {
        assert_eq!(predicted_value(&desc(CycleKind::Rotation, vec![0], vec![0])).unwrap(), 0);
        assert_eq!(predicted_value(&desc(CycleKind::Rotation, vec![3], vec![1])).unwrap(), 1);
        assert_eq!(predicted_value(&desc(CycleKind::Bracket, vec![0, 0], vec![1, 1])).unwrap(), 0);
        assert_eq!(predicted_value(&desc(CycleKind::FramedSelfDrag, vec![3], vec![1])).unwrap(), 1);
        assert_eq!(predicted_value(&desc(CycleKind::FramedSelfDrag, vec![-2], vec![1])).unwrap(), 0);
        assert_eq!(predicted_value(&desc(CycleKind::FramedDragLoop, vec![1, 3], vec![0, 1])).unwrap(), 1);
        assert_eq!(predicted_value(&desc(CycleKind::FramedDragLoop, vec![3, 0], vec![1, 1])).unwrap(), 1);
        assert!(matches!(
            predicted_value(&desc(CycleKind::DragPath, vec![0, 0], vec![0, 0])),
            Err(Error::UnknownKind(_))
        ));
    }

    #[test]
    fn membership_patterns() {
        // bead occupies (1, 2)
        let m = |t: f64| Some(if t > 1.0 && t < 2.0 { Member::S } else { Member::B });
        let c = |condition, points: &[f64]| Configuration { condition, points: points.to_vec() };
        assert_eq!(classify_configuration(&c(1, &[0.5, 1.2, 1.4, 2.5, 3.0]), m), Table1Line::I);
        assert_eq!(classify_configuration(&c(1, &[1.1, 1.2, 1.4, 1.5, 3.0]), m), Table1Line::II);
        assert_eq!(classify_configuration(&c(2, &[1.1, 1.2, 1.4, 1.5]), m), Table1Line::III);
        assert_eq!(classify_configuration(&c(2, &[1.1, 1.2, 1.4, 2.5]), m), Table1Line::IV);
        assert_eq!(classify_configuration(&c(2, &[0.1, 1.2, 2.4, 2.5]), m), Table1Line::V);
        assert_eq!(classify_configuration(&c(3, &[1.1, 1.2, 2.4]), m), Table1Line::VI);
        assert_eq!(classify_configuration(&c(3, &[0.1, 1.2, 1.4]), m), Table1Line::Unclassified);
        assert_eq!(classify_configuration(&c(2, &[0.1, 0.2, 0.4, 0.5]), m), Table1Line::Unclassified);
        assert_eq!(classify_configuration(&c(2, &[0.1, 0.2, 0.4, 0.5]), |_| None), Table1Line::Unclassified);
    }

    #[test]
    fn empty_path_satisfies_identities() {
        let chk = verify_table1_identities(&[], 0, 1);
        assert!(chk.all_hold());
        let chk = verify_table1_identities(&[], 1, 1);
        assert!(!chk.iii_matches);
    }
}
