use cocycle_core::cycles::{CycleKind, CycleRecipe, Phase};
use cocycle_core::sweep::{cocycle_value_mod2, path_count_mod2, SweepConfig};
use cocycle_core::ToleranceSet;

fn recipe(kind: CycleKind, names: &[&str]) -> CycleRecipe {
    CycleRecipe::from_names(kind, names).unwrap()
}

#[test]
fn every_kind_closes_up() {
    let tol = ToleranceSet::default();
    let cases: [(CycleKind, &[&str]); 8] = [
        (CycleKind::Rotation, &["trefoil"]),
        (CycleKind::DragPath, &["kink+", "trefoil"]),
        (CycleKind::Bracket, &["trefoil", "figure-eight"]),
        (CycleKind::SelfDrag, &["figure-eight"]),
        (CycleKind::FramedDragLoop, &["kink-", "trefoil"]),
        (CycleKind::FramedSelfDrag, &["trefoil"]),
        (CycleKind::HatFlat, &["figure-eight"]),
        (CycleKind::Primitivity, &["trefoil", "figure-eight"]),
    ];
    for (kind, names) in cases {
        let cycle = recipe(kind, names).build(&tol).unwrap();
        let gap = cycle.check_closed(&tol).unwrap();
        if kind.is_loop() {
            assert!(gap < 1e-9, "{}: gap {gap}", kind.as_str());
        }
        assert!(cycle.total_weight() > 0.0);
    }
}

#[test]
fn unknot_rotation_is_empty() {
    let v = cocycle_value_mod2(&recipe(CycleKind::Rotation, &["unknot"]), &SweepConfig::default()).unwrap();
    assert_eq!(v.parity, 0);
    assert!(v.events.is_empty());
}

#[test]
fn trefoil_rotation_matches_its_arf_invariant() {
    let cfg = SweepConfig::default();
    assert_eq!(path_count_mod2(&recipe(CycleKind::Rotation, &["trefoil"]), &cfg).unwrap(), 1);
}

#[test]
fn shrinking_and_regrowing_create_no_events() {
    let v = cocycle_value_mod2(&recipe(CycleKind::FramedDragLoop, &["kink+", "trefoil"]), &SweepConfig::default())
        .unwrap();
    assert_eq!(v.parity, 1);
    let bad: Vec<_> = v.events.iter().filter(|e| matches!(e.phase, Phase::Shrink | Phase::Regrow)).collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn twisting_the_kink_creates_no_events() {
    let v = cocycle_value_mod2(&recipe(CycleKind::HatFlat, &["figure-eight"]), &SweepConfig::default()).unwrap();
    assert_eq!(v.parity, 1);
    assert!(v.events.iter().all(|e| e.phase == Phase::Slide), "{:?}", v.events);
}
