//! Order-2 invariants from the Gauss diagram.
//!
//! The count runs over pairs of crossings `(a, c)` and `(b, d)` with
//! interleaved parameters `a < b < c < d`, the point at `a` above the one at
//! `c`, and the point at `d` above the one at `b`. Its parity is the Arf
//! invariant; weighting each pair by the product of the two crossing signs
//! gives the Casson invariant (second coefficient of the Conway polynomial).

use crate::curve::LongKnot;
use crate::diagram::{compute_crossings, Crossing};
use crate::tolerance::ToleranceSet;

/// Visit every interleaved pair `(first, second)` of the configuration.
pub fn for_each_v2_pair(crossings: &[Crossing], mut f: impl FnMut(&Crossing, &Crossing)) {
    for x in crossings.iter().filter(|c| c.lo_above) {
        for y in crossings.iter().filter(|c| !c.lo_above) {
            if x.lo < y.lo && y.lo < x.hi && x.hi < y.hi {
                f(x, y);
            }
        }
    }
}

pub fn v2_count(crossings: &[Crossing]) -> u64 {
    let mut n = 0;
    for_each_v2_pair(crossings, |_, _| n += 1);
    n
}

pub fn v2_signed_of(crossings: &[Crossing]) -> i64 {
    let mut n = 0i64;
    for_each_v2_pair(crossings, |x, y| n += (x.sign as i64) * (y.sign as i64));
    n
}

pub fn v2_mod2(k: &LongKnot, tol: &ToleranceSet) -> u8 {
    (v2_count(&compute_crossings(k, tol)) % 2) as u8
}

/// Arf invariant: equal to `v2_mod2`.
pub fn arf(k: &LongKnot, tol: &ToleranceSet) -> u8 {
    v2_mod2(k, tol)
}

/// Integer order-2 invariant, normalized so that the trefoil has value 1
/// and the figure-eight knot -1.
pub fn v2_signed(k: &LongKnot, tol: &ToleranceSet) -> i64 {
    v2_signed_of(&compute_crossings(k, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_catalog_knot;
    use crate::diagram::crossing_at;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn catalog_values() {
        let tol = ToleranceSet::default();
        let v = |n: &str| v2_signed(&make_catalog_knot(n).unwrap(), &tol);
        assert_eq!(v("unknot"), 0);
        assert_eq!(v("trefoil"), 1);
        assert_eq!(v("trefoil-mirror"), 1);
        assert_eq!(v("figure-eight"), -1);
        assert_eq!(v("kink+"), 0);
        assert_eq!(v("trefoil#trefoil"), 2);
        assert_eq!(v("trefoil#figure-eight"), 0);
    }

    #[test]
    fn kinks_do_not_change_v2() {
        let tol = ToleranceSet::default();
        let a = make_catalog_knot("kink+#figure-eight#kink-").unwrap();
        assert_eq!(v2_signed(&a, &tol), -1);
    }

    #[test]
    fn synthetic_pair() {
        let k = make_catalog_knot("unknot").unwrap();
        let mut x = crossing_at(&k, 0.0, 2.0);
        x.lo_above = true;
        let mut y = crossing_at(&k, 1.0, 3.0);
        y.lo_above = false;
        let cs: Vec<Crossing> = vec![x, y];
        assert_eq!(v2_count(&cs), 1);
        let mut y2 = y;
        y2.lo_above = true;
        assert_eq!(v2_count(&[x, y2]), 0);
    }
}
