use mskit_core::harness::{check_order_batch, check_theorem71_batch, RunReport};
use proptest::prelude::*;
use serde_json::json;

fn report(name: &str, records: &[(u8, bool)], tag: u64) -> RunReport {
    let mut r = RunReport::new(name);
    r.instances = records.len() as u64;
    r.skipped = tag % 3;
    for &(inv, ok) in records {
        r.record(&format!("inv{}", inv % 3), ok, || json!({ "tag": tag }));
    }
    r
}

fn records() -> impl Strategy<Value = Vec<(u8, bool)>> {
    prop::collection::vec((any::<u8>(), prop::bool::weighted(0.8)), 0..6)
}

#[test]
fn counterexample_is_the_first_failure() {
    let mut r = RunReport::new("x");
    r.record("a", true, || json!(0));
    assert!(r.counterexample.is_none() && r.passed());
    r.record("a", false, || json!(1));
    r.record("b", false, || json!(2));
    assert_eq!(r.failures(), 2);
    assert_eq!(r.passes(), 1);
    assert_eq!(r.counterexample, Some(json!({ "invariant": "a", "input": 1 })));
}

#[test]
fn batches_depend_only_on_the_seed() {
    let a = check_theorem71_batch(7, 24);
    let b = check_theorem71_batch(7, 24);
    assert_eq!(a.untimed(), b.untimed());
    assert_eq!(a.seed, Some(7));
    assert!(a.passed(), "{:?}", a.counterexample);
    let c = check_order_batch(3, 12);
    assert_eq!(c.untimed(), check_order_batch(3, 12).untimed());
}

proptest! {
    #[test]
    fn merge_is_associative(x in records(), y in records(), z in records()) {
        let (a, b, c) = (report("r", &x, 1), report("r", &y, 2), report("r", &z, 3));
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.merge(b.merge(c));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.counterexample.is_some(), left.failures() > 0);
    }
}
