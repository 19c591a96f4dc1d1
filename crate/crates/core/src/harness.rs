//! Seeded instance generators and batch checks with mergeable reports.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::builders;
use crate::charts::{AnnulusArc, AnnulusChart, DiskArc, DiskChart, Periodicity};
use crate::io;
use crate::qp::{fz_mutate, gentle_check, qp_from_triangulation};
use crate::quiver::{
    check_theorem71, coloured_quiver, mutate, reduction_chart, ColouredQuiver, QuiverError,
};
use crate::surface::{EdgeId, SurfaceComplex};

/// Colour window used for infinite periodicities in the batch checks.
pub const WINDOW: (i64, i64) = (-8, 8);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: u64,
    pub fail: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub name: String,
    pub seed: Option<u64>,
    pub instances: u64,
    pub skipped: u64,
    pub tallies: BTreeMap<String, Tally>,
    /// Inputs of the first failure; present exactly when some tally failed.
    pub counterexample: Option<Value>,
    pub wall_time_ms: u128,
}

impl RunReport {
    pub fn new(name: &str) -> Self {
        RunReport {
            name: name.to_string(),
            seed: None,
            instances: 0,
            skipped: 0,
            tallies: BTreeMap::new(),
            counterexample: None,
            wall_time_ms: 0,
        }
    }

    pub fn record(&mut self, invariant: &str, ok: bool, payload: impl FnOnce() -> Value) {
        let t = self.tallies.entry(invariant.to_string()).or_default();
        if ok {
            t.pass += 1;
        } else {
            t.fail += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(json!({ "invariant": invariant, "input": payload() }));
            }
        }
    }

    /// Associative; the left counterexample wins.
    pub fn merge(mut self, other: RunReport) -> RunReport {
        self.instances += other.instances;
        self.skipped += other.skipped;
        for (k, t) in other.tallies {
            let e = self.tallies.entry(k).or_default();
            e.pass += t.pass;
            e.fail += t.fail;
        }
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
        self.seed = self.seed.or(other.seed);
        self.wall_time_ms = self.wall_time_ms.max(other.wall_time_ms);
        self
    }

    pub fn failures(&self) -> u64 {
        self.tallies.values().map(|t| t.fail).sum()
    }

    pub fn passes(&self) -> u64 {
        self.tallies.values().map(|t| t.pass).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// Report with timing zeroed, for comparing runs.
    pub fn untimed(&self) -> RunReport {
        RunReport {
            wall_time_ms: 0,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ambient {
    Disk,
    Annulus,
    Torus,
}

impl Ambient {
    pub const ALL: [Ambient; 3] = [Ambient::Disk, Ambient::Annulus, Ambient::Torus];
}

/// Per-instance generator, independent of scheduling.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_subset<T: Copy>(rng: &mut impl Rng, xs: &[T]) -> Vec<T> {
    loop {
        let out: Vec<T> = xs.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !out.is_empty() || xs.is_empty() {
            return out;
        }
    }
}

fn random_disk_chords(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    let chart = DiskChart::new(n).expect("n >= 4");
    let mut all: Vec<DiskArc> = (0..n)
        .flat_map(|i| (i + 2..n).map(move |j| DiskArc::new(i, j)))
        .filter(|a| chart.check(*a).is_ok())
        .collect();
    all.shuffle(rng);
    let mut out: Vec<DiskArc> = Vec::new();
    for a in all {
        if out.iter().all(|&b| chart.crossing(a, b) == 0) {
            out.push(a);
        }
    }
    out.into_iter().map(|a| (a.i(), a.j())).collect()
}

fn random_annulus_arcs(rng: &mut impl Rng, n0: usize, n1: usize) -> Vec<AnnulusArc> {
    let chart = AnnulusChart::new(n0, n1).expect("n0, n1 >= 1");
    let mut all = Vec::new();
    for p in 0..n0 {
        for q in 0..n1 {
            for w in -2..=2 {
                all.push(AnnulusArc::Bridging { p, q, w });
            }
        }
    }
    for (boundary, n) in [(0, n0), (1, n1)] {
        for p in 0..n {
            for q in 0..n {
                all.push(AnnulusArc::Peripheral { boundary, p, q });
            }
        }
    }
    all.retain(|a| chart.check(*a).is_ok());
    all.shuffle(rng);
    let mut out: Vec<AnnulusArc> = Vec::new();
    for a in all {
        if out.len() < n0 + n1 && out.iter().all(|&b| chart.crossing(a, b) == 0) {
            out.push(a);
        }
    }
    chart.extend_to_triangulation(&out).expect("noncrossing input")
}

fn random_torus(rng: &mut impl Rng) -> SurfaceComplex {
    let mut x = builders::torus();
    for _ in 0..rng.gen_range(0..8) {
        let edges: Vec<EdgeId> = x.interior_edges().into_iter().collect();
        if let Ok(y) = x.flip(*edges.choose(rng).expect("edges")) {
            x = y;
        }
    }
    x
}

/// Random full triangulation of the ambient, with `R` empty.
pub fn random_triangulation(rng: &mut impl Rng, ambient: Ambient) -> SurfaceComplex {
    let x = match ambient {
        Ambient::Disk => {
            let n = rng.gen_range(4..=10);
            builders::polygon(n, &random_disk_chords(rng, n)).expect("noncrossing chords")
        }
        Ambient::Annulus => {
            let (n0, n1) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            builders::annulus(n0, n1, &random_annulus_arcs(rng, n0, n1))
                .expect("noncrossing arcs")
        }
        Ambient::Torus => random_torus(rng),
    };
    x.with_partial([]).expect("empty partial triangulation")
}

/// Random triangulation of the ambient with a random nonempty `R`.
pub fn random_partial(rng: &mut impl Rng, ambient: Ambient) -> SurfaceComplex {
    let x = random_triangulation(rng, ambient);
    let edges: Vec<EdgeId> = x.interior_edges().into_iter().collect();
    let r = random_subset(rng, &edges);
    x.with_partial(r).expect("interior edges")
}

fn payload(x: &SurfaceComplex, extra: Value) -> Value {
    let surface: Value = serde_json::from_str(&io::surface_to_json(x)).expect("valid JSON");
    json!({ "surface": surface, "detail": extra })
}

/// Draws instances until `accept` yields a value; gives up after 200 tries.
fn draw<T>(
    rng: &mut ChaCha8Rng,
    ambient: Ambient,
    skipped: &mut u64,
    mut accept: impl FnMut(&mut ChaCha8Rng, SurfaceComplex) -> Option<T>,
) -> Option<T> {
    for _ in 0..200 {
        let x = random_partial(rng, ambient);
        if let Some(v) = accept(rng, x) {
            return Some(v);
        }
        *skipped += 1;
    }
    None
}

fn supported<T>(r: Result<T, QuiverError>) -> Option<Result<T, QuiverError>> {
    match r {
        Err(QuiverError::UnsupportedSurface { .. }) => None,
        r => Some(r),
    }
}

fn batch(
    name: &str,
    seed: u64,
    count: u64,
    one: impl Fn(u64, &mut ChaCha8Rng, Ambient) -> RunReport + Sync,
) -> RunReport {
    let start = Instant::now();
    let mut report = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            one(i, &mut rng, Ambient::ALL[(i % 3) as usize])
        })
        .reduce(|| RunReport::new(name), RunReport::merge);
    report.name = name.to_string();
    report.seed = Some(seed);
    report.wall_time_ms = start.elapsed().as_millis();
    report
}

/// Mutation rules on random `(complex, k)` pairs.
pub fn check_theorem71_batch(seed: u64, count: u64) -> RunReport {
    batch("theorem71", seed, count, |_, rng, ambient| {
        let mut r = RunReport::new("theorem71");
        let found = draw(rng, ambient, &mut r.skipped, |rng, x| {
            let k = *x.partial().iter().collect::<Vec<_>>().choose(rng)?;
            let q = supported(coloured_quiver(&x, Some(WINDOW)))?;
            let y = supported(mutate(&x, *k))?;
            let qt = match y {
                Ok(y) => supported(coloured_quiver(&y, Some(WINDOW)))?,
                Err(e) => Err(e),
            };
            Some((x.clone(), *k, q, qt))
        });
        let Some((x, k, q, qt)) = found else {
            return r;
        };
        r.instances += 1;
        match (q, qt) {
            (Ok(q), Ok(qt)) => match check_theorem71(&q, &qt, k) {
                Ok(rep) => {
                    let detail = || payload(&x, json!({ "k": k, "report": rep }));
                    let vok = |v: &crate::quiver::VertexVerdict| v.d_equal && v.failures.is_empty();
                    r.record("clause-i", vok(&rep.clause_i), detail);
                    r.record(
                        "clause-ii-vertices",
                        rep.clause_ii_vertices.iter().all(vok),
                        detail,
                    );
                    r.record(
                        "clause-ii-pairs",
                        rep.clause_ii_pairs.iter().all(|p| p.failures.is_empty()),
                        detail,
                    );
                }
                Err(e) => r.record("checkable", false, || {
                    payload(&x, json!({ "k": k, "error": e.to_string() }))
                }),
            },
            (q, qt) => r.record("computable", false, || {
                payload(
                    &x,
                    json!({ "k": k, "quiver": format!("{:?}", q.err()), "mutated": format!("{:?}", qt.err()) }),
                )
            }),
        }
        r
    })
}

/// Quiver of the cut surface against the subquiver of the original.
pub fn check_cut_subquiver_batch(seed: u64, count: u64) -> RunReport {
    batch("cut-subquiver", seed, count, |_, rng, ambient| {
        let mut r = RunReport::new("cut-subquiver");
        let found = draw(rng, ambient, &mut r.skipped, |rng, x| {
            let arcs: Vec<EdgeId> = x.partial().iter().copied().collect();
            if arcs.len() < 2 {
                return None;
            }
            let s: BTreeSet<EdgeId> = loop {
                let s: BTreeSet<EdgeId> = random_subset(rng, &arcs).into_iter().collect();
                if s.len() < arcs.len() {
                    break s;
                }
            };
            let q = supported(coloured_quiver(&x, Some(WINDOW)))?;
            let y = x.cut(&s).map_err(QuiverError::from);
            let qc = match &y {
                Ok(y) => supported(coloured_quiver(y, Some(WINDOW)))?,
                Err(e) => Err(e.clone()),
            };
            Some((x.clone(), s, q, qc))
        });
        let Some((x, s, q, qc)) = found else {
            return r;
        };
        r.instances += 1;
        let ok = matches!((&q, &qc), (Ok(q), Ok(qc)) if q.subquiver_after_cut(&s) == *qc);
        r.record("cut-compatible", ok, || {
            payload(
                &x,
                json!({
                    "cut": s,
                    "subquiver": q.as_ref().ok().map(|q| io::quiver_to_json(&q.subquiver_after_cut(&s))),
                    "cut_quiver": qc.as_ref().map(io::quiver_to_json).map_err(|e| e.to_string()),
                }),
            )
        });
        r
    })
}

/// Flip against FZ mutation, FZ involutivity and gentleness on random full
/// triangulations.
pub fn check_flip_fz_batch(seed: u64, count: u64) -> RunReport {
    batch("flip-fz", seed, count, |_, rng, ambient| {
        let mut r = RunReport::new("flip-fz");
        let mut found = None;
        for _ in 0..200 {
            let x = random_triangulation(rng, ambient);
            let edges: Vec<EdgeId> = x.interior_edges().into_iter().collect();
            let Some(&e) = edges.choose(rng) else {
                r.skipped += 1;
                continue;
            };
            match x.flip(e) {
                Ok(y) => {
                    found = Some((x, e, y));
                    break;
                }
                Err(_) => r.skipped += 1,
            }
        }
        let Some((x, e, y)) = found else {
            return r;
        };
        r.instances += 1;
        let detail = |what: &str| payload(&x, json!({ "edge": e, "what": what }));
        let (qx, qy) = match (qp_from_triangulation(&x), qp_from_triangulation(&y)) {
            (Ok(a), Ok(b)) => (a, b),
            (a, b) => {
                r.record("qp-built", false, || {
                    detail(&format!("{:?} / {:?}", a.err(), b.err()))
                });
                return r;
            }
        };
        let reduced = qx.quiver.reduced();
        let mutated = fz_mutate(&reduced, e);
        let ok = matches!(&mutated, Ok(m) if m.exchange_matrix() == qy.quiver.reduced().exchange_matrix());
        r.record("flip-equals-fz", ok, || detail("flip"));
        let back = mutated.and_then(|m| fz_mutate(&m, e));
        let ok = matches!(&back, Ok(b) if b.exchange_matrix() == reduced.exchange_matrix());
        r.record("fz-involution", ok, || detail("involution"));
        for (tag, qp) in [("before", &qx), ("after", &qy)] {
            let ok = matches!(gentle_check(&qp.quiver, &qp.relations()), Ok(v) if v.gentle);
            r.record("gentle", ok, || detail(tag));
        }
        r
    })
}

fn quiver_at(x: &SurfaceComplex) -> Option<Result<ColouredQuiver, QuiverError>> {
    supported(coloured_quiver(x, Some(WINDOW)))
}

/// Order of mutation at a finite-periodicity vertex, twist inverses and flip
/// involutivity.
pub fn check_order_batch(seed: u64, count: u64) -> RunReport {
    batch("order", seed, count, |_, rng, ambient| {
        let mut r = RunReport::new("order");
        let found = draw(rng, ambient, &mut r.skipped, |rng, x| {
            let ks: Vec<EdgeId> = x.partial().iter().copied().collect();
            let k = *ks.choose(rng)?;
            let q = quiver_at(&x)?;
            let d = match q.as_ref().ok().and_then(|q| q.d(k)) {
                Some(Periodicity::Finite(d)) => d,
                Some(Periodicity::Infinite) => return None,
                None => 0,
            };
            Some((x.clone(), k, q, d))
        });
        let Some((x, k, q, d)) = found else {
            return r;
        };
        r.instances += 1;
        let detail = |what: &str| payload(&x, json!({ "k": k, "what": what }));
        let Ok(q) = q else {
            r.record("computable", false, || detail("quiver"));
            return r;
        };
        let mut y = Ok(x.clone());
        for _ in 0..d {
            y = y.and_then(|y| mutate(&y, k));
        }
        let ok = matches!(y.and_then(|y| coloured_quiver(&y, Some(WINDOW))), Ok(qy) if qy == q);
        r.record("mutation-order", ok, || detail("mutation order"));

        let ok = match reduction_chart(&x, k) {
            Ok(red) => [1, -1].iter().all(|&s| {
                red.chart
                    .shift(red.arc, s)
                    .and_then(|a| red.chart.shift(a, -s))
                    .is_ok_and(|a| a == red.arc)
            }),
            Err(_) => false,
        };
        r.record("twist-inverse", ok, || detail("twist"));

        let mut edges: Vec<EdgeId> = x.interior_edges().into_iter().collect();
        edges.shuffle(rng);
        if let Some((e, y)) = edges.iter().find_map(|&e| x.flip(e).ok().map(|y| (e, y))) {
            let ok = y.flip(e).is_ok_and(|z| {
                z.is_isomorphic(&x)
                    && z.interior_edges() == x.interior_edges()
                    && z.partial() == x.partial()
            });
            r.record("flip-involution", ok, || detail("flip"));
        }
        r
    })
}
