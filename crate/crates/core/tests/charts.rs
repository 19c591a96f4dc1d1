mod common;

use common::{strip_crossings, tent, Lift};
use mskit_core::charts::{AnnulusArc, AnnulusChart, ChartArc, DiskArc, DiskChart, Periodicity};
use mskit_core::surface::Provenance;
use proptest::prelude::*;

fn b(p: usize, q: usize, w: i64) -> AnnulusArc {
    AnnulusArc::Bridging { p, q, w }
}

fn per(boundary: usize, p: usize, q: usize) -> AnnulusArc {
    AnnulusArc::Peripheral { boundary, p, q }
}

#[test]
fn disk_periodicities() {
    let hex = DiskChart::new(6).unwrap();
    assert_eq!(hex.periodicity(DiskArc::new(0, 3)), Periodicity::Finite(3));
    assert_eq!(hex.periodicity(DiskArc::new(0, 2)), Periodicity::Finite(6));
    let pent = DiskChart::new(5).unwrap();
    assert_eq!(pent.periodicity(DiskArc::new(0, 2)), Periodicity::Finite(5));
}

#[test]
fn disk_shift_moves_both_ends_clockwise() {
    let c = DiskChart::new(6).unwrap();
    assert_eq!(c.shift(DiskArc::new(0, 3), 1), DiskArc::new(1, 4));
    assert_eq!(c.shift(DiskArc::new(0, 3), 3), DiskArc::new(0, 3));
    assert_eq!(c.shift(DiskArc::new(1, 4), -2), DiskArc::new(2, 5));
}

#[test]
fn disk_crossing() {
    let c = DiskChart::new(6).unwrap();
    assert_eq!(c.crossing(DiskArc::new(0, 3), DiskArc::new(1, 4)), 1);
    assert_eq!(c.crossing(DiskArc::new(0, 3), DiskArc::new(3, 5)), 0);
    assert_eq!(c.crossing(DiskArc::new(0, 2), DiskArc::new(3, 5)), 0);
}

#[test]
fn disk_followers_are_the_clockwise_segments() {
    let c = DiskChart::new(5).unwrap();
    let (f, g) = c.followers(DiskArc::new(1, 3));
    assert_eq!(f, Provenance::OriginalBoundary(1));
    assert_eq!(g, Provenance::OriginalBoundary(3));
}

#[test]
fn disk_invalid_arcs() {
    let c = DiskChart::new(5).unwrap();
    assert!(c.check(DiskArc::new(0, 1)).is_err());
    assert!(c.check(DiskArc::new(0, 4)).is_err());
    assert!(c.check(DiskArc::new(0, 7)).is_err());
    assert!(c.check(DiskArc::new(1, 3)).is_ok());
    assert!(DiskChart::new(4).is_ok());
    assert!(DiskChart::new(3).is_err());
}

#[test]
fn annulus_shift_and_periodicity() {
    let c = AnnulusChart::new(2, 2).unwrap();
    assert_eq!(c.shift(b(1, 1, 0), 1), b(0, 0, 2));
    assert_eq!(c.shift(b(0, 0, 2), -1), b(1, 1, 0));
    assert_eq!(c.periodicity(b(0, 0, 0)), Periodicity::Infinite);
    assert_eq!(c.periodicity(per(0, 0, 0)), Periodicity::Finite(2));
    let c = AnnulusChart::new(3, 1).unwrap();
    assert_eq!(c.periodicity(per(0, 0, 2)), Periodicity::Finite(3));
    assert_eq!(c.shift(per(0, 0, 2), 3), per(0, 0, 2));
}

#[test]
fn annulus_crossing_counts_lifts() {
    let c = AnnulusChart::new(2, 2).unwrap();
    // adjacent windings share both endpoints' orbits and never cross
    assert_eq!(c.crossing(b(0, 0, 0), b(0, 0, 1)), 0);
    assert_eq!(c.crossing(b(0, 0, 0), b(0, 0, 2)), 1);
    assert_eq!(c.crossing(b(0, 0, 0), b(0, 0, 5)), 4);
    assert_eq!(c.crossing(b(0, 0, 0), b(1, 0, 0)), 0);
    assert_eq!(c.crossing(per(0, 0, 0), b(0, 1, 0)), 0);
    assert_eq!(c.crossing(per(0, 0, 0), b(1, 1, 0)), 1);
}

#[test]
fn annulus_invalid_arcs() {
    let c = AnnulusChart::new(1, 2).unwrap();
    assert!(c.check(b(1, 0, 0)).is_err());
    // a loop at the only marked point of B0 is boundary-parallel
    assert!(c.check(per(0, 0, 0)).is_err());
    assert!(c.check(per(1, 0, 0)).is_ok());
    assert!(c.check(per(1, 0, 1)).is_err());
    assert!(c.check(per(2, 0, 0)).is_err());
    assert!(AnnulusChart::new(0, 3).is_err());
}

#[test]
fn literals_parse() {
    for s in ["D{0,3}", "B(1,0;-2)", "P(1;0,2)"] {
        let a: ChartArc = s.parse().unwrap();
        assert_eq!(a.to_string(), s);
    }
    assert_eq!("D{3,0}".parse::<ChartArc>().unwrap().to_string(), "D{0,3}");
    for s in ["", "D{0}", "B(1,2)", "Q(1;2,3)", "P(1;-2,0)", "D{a,b}"] {
        assert!(s.parse::<ChartArc>().is_err(), "{s}");
    }
}

#[test]
fn annulus_extension_counts() {
    for (n0, n1) in [(1, 1), (1, 3), (2, 2), (3, 4)] {
        let c = AnnulusChart::new(n0, n1).unwrap();
        let all = c.extend_to_triangulation(&[]).unwrap();
        assert_eq!(all.len(), n0 + n1);
        let crossing = c.extend_to_triangulation(&[b(0, 0, 0), b(0, 0, 2)]);
        assert!(crossing.is_err());
    }
}

fn lift_of(n0: usize, n1: usize, a: AnnulusArc) -> Lift {
    let (f0, f1) = (n0 as f64, n1 as f64);
    match a {
        AnnulusArc::Bridging { p, q, w } => Lift(vec![
            (-(p as f64) / f0, 0.0),
            ((q as f64 + f1 * w as f64) / f1, 1.0),
        ]),
        AnnulusArc::Peripheral { boundary, p, q } => {
            let n = if boundary == 0 { n0 } else { n1 };
            let len = if p == q { n } else { (q + n - p) % n } as f64;
            let nf = n as f64;
            if boundary == 0 {
                tent((-(p as f64) - len) / nf, -(p as f64) / nf, false)
            } else {
                tent(p as f64 / nf, (p as f64 + len) / nf, true)
            }
        }
    }
}

fn annulus_arc(n0: usize, n1: usize) -> impl Strategy<Value = AnnulusArc> {
    prop_oneof![
        (0..n0, 0..n1, -3i64..=3).prop_map(|(p, q, w)| b(p, q, w)),
        (0..n0, 0..n0).prop_map(|(p, q)| per(0, p, q)),
        (0..n1, 0..n1).prop_map(|(p, q)| per(1, p, q)),
    ]
}

fn annulus_case() -> impl Strategy<Value = (usize, usize, AnnulusArc, AnnulusArc)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(n0, n1)| {
        (Just(n0), Just(n1), annulus_arc(n0, n1), annulus_arc(n0, n1))
    })
}

proptest! {
    #[test]
    fn annulus_crossing_matches_geometry((n0, n1, x, y) in annulus_case()) {
        let c = AnnulusChart::new(n0, n1).unwrap();
        prop_assume!(c.check(x).is_ok() && c.check(y).is_ok());
        let expected = strip_crossings(&lift_of(n0, n1, x), &lift_of(n0, n1, y));
        prop_assert_eq!(c.crossing(x, y) as usize, expected);
        prop_assert_eq!(c.crossing(x, y), c.crossing(y, x));
    }

    #[test]
    fn annulus_shift_inverse_and_periodicity((n0, n1, x, _y) in annulus_case(), s in -6i64..=6) {
        let c = AnnulusChart::new(n0, n1).unwrap();
        prop_assume!(c.check(x).is_ok());
        let moved = c.shift(x, s);
        prop_assert!(c.check(moved).is_ok());
        prop_assert_eq!(c.shift(moved, -s), x);
        match c.periodicity(x) {
            Periodicity::Finite(d) => prop_assert_eq!(c.shift(x, d as i64), x),
            Periodicity::Infinite => prop_assert_ne!(moved == x, s != 0),
        }
    }

    #[test]
    fn disk_shift_period_and_crossing_symmetry(n in 4usize..=12, x in 0usize..12, y in 0usize..12, z in 0usize..12, w in 0usize..12) {
        let c = DiskChart::new(n).unwrap();
        let a = DiskArc::new(x % n, y % n);
        let o = DiskArc::new(z % n, w % n);
        prop_assume!(c.check(a).is_ok() && c.check(o).is_ok());
        let d = c.periodicity(a).finite().unwrap();
        prop_assert_eq!(c.shift(a, d as i64), a);
        prop_assert!((1..d as i64).all(|s| c.shift(a, s) != a));
        prop_assert_eq!(c.crossing(a, o), c.crossing(o, a));
        let (p, q) = (a.i(), a.j());
        let inside = |v: usize| p < v && v < q;
        let expected = u32::from(inside(o.i()) != inside(o.j()) && ![p, q].contains(&o.i()) && ![p, q].contains(&o.j()));
        prop_assert_eq!(c.crossing(a, o), expected);
    }
}
