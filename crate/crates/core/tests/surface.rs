use std::collections::BTreeSet;

use mskit_core::builders;
use mskit_core::harness::{instance_rng, random_partial, random_triangulation, Ambient};
use mskit_core::surface::{ArcSide, ForbiddenKind, Provenance, SurfaceComplex, SurfaceError, Triangle};
use mskit_core::{coloured_quiver, AnnulusArc};
use proptest::prelude::*;

fn set(xs: &[u32]) -> BTreeSet<u32> {
    xs.iter().copied().collect()
}

fn class(x: &SurfaceComplex) -> String {
    x.validate().unwrap().to_string()
}

#[test]
fn classifies_builders() {
    assert_eq!(class(&builders::polygon(5, &[(0, 2), (0, 3)]).unwrap()), "g=0 b=1 c=5 n=2");
    assert_eq!(class(&builders::polygon(12, &[]).unwrap()), "g=0 b=1 c=12 n=9");
    let a = builders::annulus(2, 3, &[AnnulusArc::Bridging { p: 0, q: 0, w: 0 }]).unwrap();
    assert_eq!(class(&a), "g=0 b=2 c=5 n=5");
    assert_eq!(class(&builders::torus()), "g=1 b=1 c=2 n=5");
    assert_eq!(class(&builders::genus2()), "g=2 b=1 c=1 n=10");
}

#[test]
fn rejects_bad_complexes() {
    let t = |id, sides| Triangle { id, sides };
    let single = SurfaceComplex::new(vec![t(0, [0, 1, 2])], &[], []).unwrap();
    assert!(matches!(
        single.validate(),
        Err(SurfaceError::ForbiddenComponent { kind: ForbiddenKind::Triangle, .. })
    ));
    assert!(matches!(
        SurfaceComplex::new(vec![t(0, [0, 1, 2])], &[(0, 1), (1, 2)], []),
        Err(SurfaceError::MalformedGluing(_))
    ));
    assert!(matches!(
        SurfaceComplex::new(vec![t(0, [0, 1, 2]), t(0, [3, 4, 5])], &[], []),
        Err(SurfaceError::MalformedGluing(_))
    ));
    assert!(matches!(
        SurfaceComplex::new(vec![t(0, [0, 1, 2])], &[(0, 7)], []),
        Err(SurfaceError::MalformedGluing(_))
    ));
    assert_eq!(SurfaceComplex::new(vec![], &[], []).unwrap().validate(), Err(SurfaceError::Empty));
    // two triangles glued along two sides: an annulus with one point per boundary
    let ring = SurfaceComplex::new(vec![t(0, [0, 1, 2]), t(1, [3, 4, 5])], &[(2, 5), (1, 4)], []).unwrap();
    assert_eq!(class(&ring), "g=0 b=2 c=2 n=2");
    // two triangles glued along all sides form a sphere with punctures
    let sphere =
        SurfaceComplex::new(vec![t(0, [0, 1, 2]), t(1, [3, 4, 5])], &[(0, 5), (1, 4), (2, 3)], []).unwrap();
    assert!(matches!(sphere.validate(), Err(SurfaceError::PuncturedVertex { .. })));
    assert!(matches!(
        builders::torus().with_partial([9]),
        Err(SurfaceError::UnknownEdge(9))
    ));
}

#[test]
fn cut_pentagon_drops_the_ear() {
    let x = builders::polygon(5, &[(0, 2), (0, 3)]).unwrap();
    let y = x.cut(&set(&[1])).unwrap();
    assert_eq!(class(&y), "g=0 b=1 c=4 n=1");
    assert_eq!(y.partial(), &set(&[2]));
    assert_eq!(y.cut_partial(), &set(&[1]));
    assert_eq!(y.removed().len(), 1);
    let lost: Vec<_> = y.removed()[0].lost_copies().collect();
    assert_eq!(lost.len(), 1);
    assert_eq!(lost[0].0, 1);
    let kept = y
        .boundary_provenance()
        .into_values()
        .filter(|p| p.arc() == Some(1))
        .count();
    assert_eq!(kept, 1);
}

#[test]
fn cut_torus() {
    let x = builders::torus();
    assert_eq!(x.cut(&BTreeSet::new()).unwrap(), x);
    let y = x.cut(&set(&[3])).unwrap();
    assert_eq!(class(&y), "g=0 b=2 c=4 n=4");
    assert!(y.removed().is_empty());
    let copies: Vec<Provenance> = y
        .boundary_provenance()
        .into_values()
        .filter(|p| p.arc().is_some())
        .collect();
    assert_eq!(
        copies,
        vec![
            Provenance::ArcCopy { arc: 3, side: ArcSide::Left },
            Provenance::ArcCopy { arc: 3, side: ArcSide::Right },
        ]
    );
    let back = y.reglue(&set(&[3])).unwrap();
    assert!(back.is_isomorphic(&x));
    assert_eq!(back.partial(), x.partial());
    assert!(matches!(x.cut(&set(&[8])), Err(SurfaceError::UnknownEdge(8))));
    assert!(matches!(y.reglue(&set(&[2])), Err(SurfaceError::MissingCopy { arc: 2, .. })));
}

#[test]
fn flip_replaces_the_diagonal() {
    let x = builders::polygon(5, &[(0, 2), (0, 3)]).unwrap();
    let y = x.flip(1).unwrap();
    assert_eq!(y.interior_edges(), x.interior_edges());
    assert_eq!(y.partial(), x.partial());
    let expected = builders::polygon(5, &[(1, 3), (0, 3)]).unwrap();
    assert_eq!(coloured_quiver(&y, None).unwrap(), coloured_quiver(&expected, None).unwrap());
    assert!(y.flip(1).unwrap().is_isomorphic(&x));
    assert!(matches!(x.flip(40), Err(SurfaceError::UnknownEdge(40))));
}

#[test]
fn self_folded_edge_is_not_flippable() {
    // a loop at the only marked point may border one triangle twice
    let x = builders::annulus(1, 2, &[AnnulusArc::Peripheral { boundary: 1, p: 0, q: 0 }]).unwrap();
    let (a, b) = x.edge_sides(1).unwrap();
    let folded = x.side_location(a).unwrap().0 == x.side_location(b).unwrap().0;
    assert_eq!(x.flip(1).is_err(), folded);
    for e in x.interior_edges() {
        if let Err(err) = x.flip(e) {
            assert_eq!(err, SurfaceError::NotFlippable(e));
        }
    }
}

#[test]
fn components_and_union() {
    let x = builders::torus().cut(&set(&[1, 2, 3])).unwrap();
    let parts = x.components();
    assert_eq!(parts.len(), x.validate().unwrap().components.len());
    let total: usize = parts.iter().map(|p| p.triangles().len()).sum();
    assert_eq!(total, x.triangles().len());
    let u = SurfaceComplex::disjoint_union(&parts).unwrap();
    assert!(u.is_isomorphic(&x));
}

fn ambient() -> impl Strategy<Value = Ambient> {
    prop_oneof![Just(Ambient::Disk), Just(Ambient::Annulus), Just(Ambient::Torus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arc_count_and_cut_reglue(seed in any::<u64>(), a in ambient()) {
        let mut rng = instance_rng(seed, 0);
        let x = random_partial(&mut rng, a);
        let c = x.validate().unwrap();
        for comp in &c.components {
            prop_assert_eq!(comp.interior_edges as i64, comp.expected_arcs());
        }
        let cut = x.cut(x.partial()).unwrap();
        prop_assert!(cut.partial().is_empty());
        let kept: BTreeSet<u32> = x
            .partial()
            .iter()
            .copied()
            .filter(|&e| !cut.removed().iter().any(|r| r.lost_copies().any(|(a, _)| a == e)))
            .collect();
        if kept.len() == x.partial().len() {
            let back = cut.reglue(&kept).unwrap();
            prop_assert!(back.is_isomorphic(&x));
            prop_assert_eq!(back.partial(), x.partial());
        }
    }

    #[test]
    fn flips_keep_the_surface(seed in any::<u64>(), a in ambient()) {
        let mut rng = instance_rng(seed, 1);
        let x = random_triangulation(&mut rng, a);
        let before = class(&x);
        for e in x.interior_edges() {
            if let Ok(y) = x.flip(e) {
                prop_assert_eq!(class(&y), before.clone());
                prop_assert!(y.flip(e).unwrap().is_isomorphic(&x));
            }
        }
    }
}
