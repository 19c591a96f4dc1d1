use std::collections::{BTreeMap, BTreeSet};

use mskit_core::builders;
use mskit_core::harness::{instance_rng, random_triangulation, Ambient};
use mskit_core::qp::{
    cyclic_derivative, fz_mutate, gentle_check, qp_delete_vertex, qp_from_triangulation, Arrow,
    GentleWitness, LinearCombination, Potential, QpError,
};
use mskit_core::{Quiver, QuiverWithPotential};
use proptest::prelude::*;

fn edges(q: &Quiver) -> BTreeMap<(u32, u32), u32> {
    q.arrow_multiset()
}

fn quiver(vs: &[u32], arrows: &[(u32, u32)]) -> Quiver {
    Quiver::new(
        vs.iter().copied(),
        arrows.iter().enumerate().map(|(i, &(src, dst))| Arrow { id: i as u64, src, dst }),
    )
    .unwrap()
}

fn pairs(xs: &[(u32, u32)]) -> BTreeMap<(u32, u32), u32> {
    let mut m = BTreeMap::new();
    for &p in xs {
        *m.entry(p).or_insert(0) += 1;
    }
    m
}

#[test]
fn hexagon_with_inner_triangle() {
    let x = builders::polygon(6, &[(0, 2), (2, 4), (0, 4)]).unwrap();
    let qp = qp_from_triangulation(&x).unwrap();
    assert_eq!(qp.quiver.arrows().count(), 3);
    let cycles: Vec<_> = qp.potential.cycles().collect();
    assert_eq!(cycles.len(), 1);
    assert_eq!(cycles[0].0.len(), 3);
    assert_eq!(qp.relations().len(), 3);
    assert!(gentle_check(&qp.quiver, &qp.relations()).unwrap().gentle);
}

#[test]
fn square_has_no_arrows() {
    let qp = qp_from_triangulation(&builders::polygon(4, &[(0, 2)]).unwrap()).unwrap();
    assert_eq!(qp.quiver.vertices().len(), 1);
    assert_eq!(qp.quiver.arrows().count(), 0);
    assert!(qp.potential.is_zero());
}

#[test]
fn torus_qp_and_deletion() {
    let x = builders::torus().with_partial([]).unwrap();
    let qp = qp_from_triangulation(&x).unwrap();
    assert_eq!(
        edges(&qp.quiver),
        pairs(&[(4, 3), (3, 1), (1, 4), (2, 5), (5, 1), (1, 2), (5, 3), (2, 4)])
    );
    let removed: BTreeSet<u32> = [3].into_iter().collect();
    let del = qp_delete_vertex(&qp, &removed);
    assert_eq!(edges(&del.quiver), pairs(&[(2, 4), (2, 5), (1, 4), (1, 2), (5, 1)]));
    let cycles: Vec<_> = del.potential.cycles().map(|(c, k)| (c.clone(), k)).collect();
    assert_eq!(cycles, vec![(vec![6, 7, 8], 1)]);
}

#[test]
fn cyclic_derivatives() {
    let mut w = Potential::default();
    w.add_cycle(&[1, 2, 3], 1);
    w.add_cycle(&[3, 4], 2);
    let mut expect = LinearCombination::default();
    expect.add(vec![1, 2], 1);
    expect.add(vec![4], 2);
    assert_eq!(cyclic_derivative(&w, 3), expect);
    assert!(cyclic_derivative(&w, 9).is_zero());
    // rotations of one cycle are the same term
    let mut v = Potential::default();
    v.add_cycle(&[2, 3, 1], 1);
    v.add_cycle(&[1, 2, 3], 1);
    assert_eq!(v.cycles().count(), 1);
    assert_eq!(v.cycles().next().unwrap().1, 2);
}

#[test]
fn fz_examples() {
    let a2 = quiver(&[1, 2], &[(1, 2)]);
    assert_eq!(edges(&fz_mutate(&a2, 1).unwrap()), pairs(&[(2, 1)]));
    let cyc = quiver(&[1, 2, 3], &[(1, 2), (2, 3), (3, 1)]);
    assert_eq!(edges(&fz_mutate(&cyc, 1).unwrap()), pairs(&[(2, 1), (1, 3)]));
    let path = quiver(&[1, 2, 3], &[(1, 2), (2, 3)]);
    assert_eq!(edges(&fz_mutate(&path, 2).unwrap()), pairs(&[(2, 1), (3, 2), (1, 3)]));
    let two = quiver(&[1, 2], &[(1, 2), (2, 1)]);
    assert_eq!(fz_mutate(&two, 1), Err(QpError::TwoCycleAtK(1)));
    assert_eq!(fz_mutate(&a2, 5), Err(QpError::UnknownVertex(5)));
}

#[test]
fn gentle_verdicts() {
    let star = quiver(&[1, 2, 3, 4], &[(1, 2), (1, 3), (1, 4)]);
    let v = gentle_check(&star, &[]).unwrap();
    assert!(!v.gentle);
    assert!(matches!(v.witness, Some(GentleWitness::OutDegree { vertex: 1, .. })));
    // two arrows into 2 followed by one out, no relations
    let y = quiver(&[1, 2, 3, 4], &[(1, 2), (3, 2), (2, 4)]);
    assert!(matches!(
        gentle_check(&y, &[]).unwrap().witness,
        Some(GentleWitness::Before { arrow: 2, related: false, .. })
    ));
    let mut rel = LinearCombination::default();
    rel.add(vec![0, 2], 1);
    assert!(gentle_check(&y, &[rel]).unwrap().gentle);
    let mut long = LinearCombination::default();
    long.add(vec![0, 2], 1);
    long.add(vec![1, 2], 1);
    assert!(matches!(gentle_check(&y, &[long]), Err(QpError::NonQuadraticRelations(_))));
}

#[test]
fn malformed_qps() {
    assert!(matches!(
        Quiver::new([1], [Arrow { id: 0, src: 1, dst: 2 }]),
        Err(QpError::Malformed(_))
    ));
    let q = quiver(&[1, 2], &[(1, 2)]);
    let mut w = Potential::default();
    w.add_cycle(&[0], 1);
    assert!(matches!(QuiverWithPotential::new(q, w), Err(QpError::Malformed(_))));
    let t = mskit_core::surface::Triangle { id: 0, sides: [0, 1, 2] };
    let single = mskit_core::SurfaceComplex::new(vec![t], &[], []).unwrap();
    assert!(matches!(qp_from_triangulation(&single), Err(QpError::NotFullTriangulation(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cutting_deletes_vertices(seed in any::<u64>(), a in 0usize..3, mask in any::<u64>()) {
        let x = random_triangulation(&mut instance_rng(seed, 0), Ambient::ALL[a]);
        let removed: BTreeSet<u32> = x
            .interior_edges()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        let qp = qp_from_triangulation(&x).unwrap();
        let cut = x.cut(&removed).unwrap();
        prop_assume!(!cut.triangles().is_empty());
        prop_assert_eq!(qp_from_triangulation(&cut).unwrap(), qp_delete_vertex(&qp, &removed));
    }
}
