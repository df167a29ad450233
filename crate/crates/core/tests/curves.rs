use cocycle_core::catalog::make_catalog_knot;
use cocycle_core::math::Vec3;
use cocycle_core::LongKnot;
use proptest::prelude::*;

fn knot(name: &str) -> LongKnot {
    make_catalog_knot(name).unwrap()
}

fn any_knot() -> impl Strategy<Value = LongKnot> {
    prop::sample::select(vec!["trefoil", "trefoil-mirror", "figure-eight", "kink+", "kink-", "trefoil#kink+"])
        .prop_map(knot)
}

/// A parameter inside the support, or a little outside it.
fn param(k: &LongKnot, r: f64) -> f64 {
    let (a, b) = k.support();
    a - 0.5 + r * (b - a + 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tails_are_the_axis(k in any_knot(), d in 0.0..50.0f64) {
        let (a, b) = k.support();
        for t in [a - d, b + d] {
            prop_assert_eq!(k.eval(t), Vec3::on_axis(t));
            prop_assert_eq!(k.deriv(t), Vec3::AXIS);
        }
    }

    #[test]
    fn derivatives_match_differences(k in any_knot(), r in 0.0..1.0f64) {
        let t = param(&k, r);
        let h = 1e-5;
        let j = k.jet(t);
        let d1 = 0.5 / h * (k.eval(t + h) - k.eval(t - h));
        let d2 = 0.5 / h * (k.deriv(t + h) - k.deriv(t - h));
        prop_assert!((d1 - j.d1).max_abs() < 1e-4 * (1.0 + j.d1.max_abs()), "d1 {:?} vs {:?}", d1, j.d1);
        prop_assert!((d2 - j.d2).max_abs() < 1e-3 * (1.0 + j.d2.max_abs()), "d2 {:?} vs {:?}", d2, j.d2);
    }

    #[test]
    fn rotation_is_an_isometry_fixing_the_axis(k in any_knot(), theta in -7.0..7.0f64, r in 0.0..1.0f64, q in 0.0..1.0f64) {
        let rk = k.rotate_about_axis(theta);
        let (s, t) = (param(&k, r), param(&k, q));
        let before = (k.eval(s) - k.eval(t)).norm();
        let after = (rk.eval(s) - rk.eval(t)).norm();
        prop_assert!((before - after).abs() < 1e-9 * (1.0 + before));
        let (a, _) = k.support();
        prop_assert!((rk.eval(a - 1.0) - Vec3::on_axis(a - 1.0)).max_abs() < 1e-12);
        prop_assert!((rk.deriv(s).norm() - k.deriv(s).norm()).abs() < 1e-9 * (1.0 + k.deriv(s).norm()));
    }

    #[test]
    fn rotations_compose(k in any_knot(), a in -4.0..4.0f64, b in -4.0..4.0f64, r in 0.0..1.0f64) {
        let t = param(&k, r);
        let two = k.rotate_about_axis(a).rotate_about_axis(b).eval(t);
        let one = k.rotate_about_axis(a + b).eval(t);
        prop_assert!((two - one).max_abs() < 1e-9);
    }

    #[test]
    fn shift_translates_along_the_tail(k in any_knot(), by in -5.0..5.0f64, r in 0.0..1.0f64) {
        let t = param(&k, r);
        let moved = k.shifted(by).eval(t + by);
        prop_assert!((moved - (k.eval(t) + Vec3::on_axis(by))).max_abs() < 1e-9);
    }
}

#[test]
fn small_beads_converge_to_the_host() {
    let host = knot("figure-eight");
    let bead = knot("trefoil");
    let (a, b) = host.support();
    let c = 0.37 * a + 0.63 * b;
    let mut last = f64::INFINITY;
    for scale in [0.004, 0.001, 0.0002] {
        let k = host.insert_scaled_copy(&bead, c, scale).unwrap();
        let dist = (0..=4000)
            .map(|i| {
                let t = a - 1.0 + (b - a + 2.0) * i as f64 / 4000.0;
                (k.eval(t) - host.eval(t)).norm()
            })
            .fold(0.0, f64::max);
        assert!(dist < last, "scale {scale}: {dist} not below {last}");
        last = dist;
    }
    assert!(last < 0.02 * host.diameter(), "{last}");
}

#[test]
fn composition_is_laid_out_left_to_right() {
    let (t, f) = (knot("trefoil"), knot("figure-eight"));
    let k = LongKnot::concat(&t, &f);
    assert_eq!(k.name(), "trefoil#figure-eight");
    assert!((k.width() - (t.width() + f.width() + cocycle_core::curve::CONCAT_GAP)).abs() < 1e-12);
    assert_eq!(k.kinks(), t.kinks() + f.kinks());
}
