use std::collections::BTreeSet;

use mskit_core::builders;
use mskit_core::harness::{instance_rng, random_partial, Ambient, WINDOW};
use mskit_core::io::{
    qp_from_json, qp_to_dot, qp_to_json, quiver_from_json, quiver_to_dot, quiver_to_json, surface_from_json,
    surface_to_json, FormatError,
};
use mskit_core::qp::qp_from_triangulation;
use mskit_core::{coloured_quiver, mutate};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn fixtures_load() {
    let torus = surface_from_json(&fixture("torus.json")).unwrap();
    assert!(torus.is_isomorphic(&builders::torus()));
    assert_eq!(torus.partial(), builders::torus().partial());
    assert!(surface_from_json(&fixture("pentagon.json")).unwrap().validate().is_ok());
    let qp = qp_from_json(&fixture("torus_qp.json")).unwrap();
    assert_eq!(qp.quiver.arrows().count(), 8);
    assert!(matches!(surface_from_json(&fixture("malformed.json")), Err(FormatError::Surface(_))));
    let empty = surface_from_json(&fixture("empty.json")).unwrap();
    assert!(empty.validate().is_err());
    assert!(matches!(surface_from_json("{"), Err(FormatError::Json(_))));
    assert!(matches!(surface_from_json(r#"{"triangles":[],"gluing":[],"extra":1}"#), Err(FormatError::Json(_))));
}

#[test]
fn cut_surfaces_keep_provenance() {
    let y = builders::torus().cut(&[3].into_iter().collect()).unwrap();
    let s = surface_to_json(&y);
    assert!(s.contains("\"boundary\"") && s.contains("\"R_cut\""));
    let back = surface_from_json(&s).unwrap();
    assert_eq!(back.boundary_provenance(), y.boundary_provenance());
    assert_eq!(back.cut_partial(), y.cut_partial());
    let glued = back.reglue(&[3].into_iter().collect()).unwrap();
    assert_eq!(glued.partial(), builders::torus().partial());
}

#[test]
fn quiver_json_rejects_bad_input() {
    let bad = [
        r#"{"vertices":[{"id":1,"d":0}],"arrows":[]}"#,
        r#"{"vertices":[{"id":1,"d":"infinite"}],"arrows":[]}"#,
        r#"{"vertices":[{"id":1,"d":"inf"}],"arrows":[]}"#,
        r#"{"vertices":[{"id":1,"d":"inf"}],"arrows":[],"window":[3,-3]}"#,
        r#"{"vertices":[{"id":1,"d":2},{"id":2,"d":2}],"arrows":[{"src":1,"dst":2,"colour":2}]}"#,
        r#"{"vertices":[{"id":1,"d":2}],"arrows":[{"src":1,"dst":5,"colour":0}]}"#,
    ];
    for s in bad {
        assert!(matches!(quiver_from_json(s), Err(FormatError::Invalid(_))), "{s}");
    }
    let ok = r#"{"vertices":[{"id":1,"d":"inf"},{"id":2,"d":3}],"arrows":[{"src":1,"dst":2,"colour":-4}],"window":[-5,5]}"#;
    let q = quiver_from_json(ok).unwrap();
    assert_eq!(q.q(1, 2, -4), 1);
}

#[test]
fn dot_output() {
    let x = builders::polygon(5, &[(0, 2), (0, 3)]).unwrap();
    let dot = quiver_to_dot(&coloured_quiver(&x, None).unwrap());
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("1 -> 2 [label=\"(1)\"]"));
    assert!(dot.contains("2 -> 1 [label=\"(0)\"]"));
    assert!(dot.contains("label=\"1 (d=2)\""));
    let qp = qp_from_triangulation(&builders::polygon(6, &[(0, 2), (2, 4), (0, 4)]).unwrap()).unwrap();
    assert_eq!(qp_to_dot(&qp).matches("style=dashed").count(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trips(seed in any::<u64>(), a in 0usize..3, cut_mask in any::<u8>()) {
        let mut rng = instance_rng(seed, 0);
        let x = random_partial(&mut rng, Ambient::ALL[a]);
        let s = surface_to_json(&x);
        let back = surface_from_json(&s).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(surface_to_json(&back), s);

        let arcs: BTreeSet<u32> = x
            .partial()
            .iter()
            .enumerate()
            .filter(|(i, _)| cut_mask >> (i % 8) & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let y = x.cut(&arcs).unwrap();
        let yb = surface_from_json(&surface_to_json(&y)).unwrap();
        prop_assert_eq!(yb.boundary_provenance(), y.boundary_provenance());
        prop_assert_eq!(yb.partial(), y.partial());
        prop_assert_eq!(yb.cut_partial(), y.cut_partial());

        let k = *x.partial().iter().next().unwrap();
        if let Ok(m) = mutate(&x, k) {
            if let Ok(q) = coloured_quiver(&m, Some(WINDOW)) {
                prop_assert_eq!(quiver_from_json(&quiver_to_json(&q)).unwrap(), q);
            }
        }
        let full = x.with_partial([]).unwrap();
        let qp = qp_from_triangulation(&full).unwrap();
        prop_assert_eq!(qp_from_json(&qp_to_json(&qp)).unwrap(), qp);
    }
}
