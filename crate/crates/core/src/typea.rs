//! Mutation of coloured quivers of polygon partial triangulations, computed
//! from the quiver alone.
//!
//! Arrows between two vertices are handled as colour lists per ordered pair.
//! The steps run in order: (i) periodicities from the quiver,
//! (ii) doubling of single-arrow pairs, (iii)-(v) rewriting around `k`, and
//! (vi) halving.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::builders;
use crate::charts::Periodicity;
use crate::harness::RunReport;
use crate::quiver::{coloured_quiver, mutate, ColouredQuiver, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeAError {
    #[error("vertex {0} has no neighbour")]
    IsolatedVertex(VertexId),
    #[error("inconsistent quiver at vertex {vertex}: {detail}")]
    InconsistentQuiver { vertex: VertexId, detail: String },
    #[error("not a type A coloured quiver: {0}")]
    NotTypeA(String),
    #[error("{0} is not a vertex")]
    UnknownVertex(VertexId),
}

/// Colour lists per ordered vertex pair, plus the periodicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkingQuiver {
    pub d: BTreeMap<VertexId, i64>,
    pub colours: BTreeMap<(VertexId, VertexId), Vec<i64>>,
}

impl WorkingQuiver {
    pub fn from_quiver(q: &ColouredQuiver) -> Result<Self, TypeAError> {
        let mut d = BTreeMap::new();
        for (&v, p) in q.periodicities() {
            match p {
                Periodicity::Finite(x) => d.insert(v, *x as i64),
                Periodicity::Infinite => {
                    return Err(TypeAError::NotTypeA(format!("vertex {v} has infinite periodicity")))
                }
            };
        }
        let mut colours: BTreeMap<(VertexId, VertexId), Vec<i64>> = BTreeMap::new();
        for ((s, t, c), m) in q.arrows() {
            if s == t {
                return Err(TypeAError::NotTypeA(format!("loop at {s}")));
            }
            colours
                .entry((s, t))
                .or_default()
                .extend(std::iter::repeat_n(c, m as usize));
        }
        Ok(WorkingQuiver { d, colours })
    }

    pub fn to_quiver(&self) -> ColouredQuiver {
        let mut q = ColouredQuiver::new(
            self.d.iter().map(|(v, d)| (*v, Periodicity::Finite(*d as u64))),
            None,
        );
        for (&(s, t), cs) in &self.colours {
            for &c in cs {
                q.add_arrow(s, t, c).expect("vertices present");
            }
        }
        q
    }

    fn pair(&self, s: VertexId, t: VertexId) -> Option<(i64, i64)> {
        self.colours.get(&(s, t)).map(|v| (v[0], v[1]))
    }

    fn neighbours(&self, i: VertexId) -> BTreeSet<VertexId> {
        self.colours
            .keys()
            .filter_map(|&(s, t)| {
                if s == i {
                    Some(t)
                } else if t == i {
                    Some(s)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// `max{c : q_ij^(c) != 0} + min{c : q_ji^(c) != 0} + 1`, checked to agree
/// over all neighbours `j`.
pub fn d_from_quiver(q: &ColouredQuiver, i: VertexId) -> Result<u64, TypeAError> {
    let w = WorkingQuiver::from_quiver(q)?;
    if !w.d.contains_key(&i) {
        return Err(TypeAError::UnknownVertex(i));
    }
    d_from_working(&w, i)
}

fn d_from_working(w: &WorkingQuiver, i: VertexId) -> Result<u64, TypeAError> {
    let mut value = None;
    for j in w.neighbours(i) {
        let (out, back) = match (w.colours.get(&(i, j)), w.colours.get(&(j, i))) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(TypeAError::InconsistentQuiver {
                    vertex: i,
                    detail: format!("arrows between {i} and {j} go one way only"),
                })
            }
        };
        let v = out.iter().max().unwrap() + back.iter().min().unwrap() + 1;
        match value {
            None => value = Some(v),
            Some(x) if x != v => {
                return Err(TypeAError::InconsistentQuiver {
                    vertex: i,
                    detail: format!("neighbours give {x} and {v}"),
                })
            }
            _ => {}
        }
    }
    value
        .map(|v| v as u64)
        .ok_or(TypeAError::IsolatedVertex(i))
}

#[derive(Clone, Debug)]
pub struct TypeATrace {
    pub input: WorkingQuiver,
    pub after_ii: WorkingQuiver,
    pub after_iii: WorkingQuiver,
    pub after_iv: WorkingQuiver,
    pub after_v: WorkingQuiver,
    pub result: WorkingQuiver,
}

fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable();
    v
}

/// Removes pairs of colours differing by one modulo `m` until none remain.
fn cancel_adjacent(mut cur: Vec<i64>, m: i64) -> Vec<i64> {
    'outer: loop {
        for x in 0..cur.len() {
            for y in x + 1..cur.len() {
                let diff = (cur[x] - cur[y]).rem_euclid(m);
                if diff == 1 || diff == m - 1 {
                    cur.remove(y);
                    cur.remove(x);
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

pub fn typea_mutate_traced(q: &ColouredQuiver, k: VertexId) -> Result<TypeATrace, TypeAError> {
    let input = WorkingQuiver::from_quiver(q)?;
    if !input.d.contains_key(&k) {
        return Err(TypeAError::UnknownVertex(k));
    }
    let verts: Vec<VertexId> = input.d.keys().copied().collect();

    // (i)
    for &i in &verts {
        match d_from_working(&input, i) {
            Ok(v) if v as i64 != input.d[&i] => {
                return Err(TypeAError::InconsistentQuiver {
                    vertex: i,
                    detail: format!("stored d = {}, quiver gives {v}", input.d[&i]),
                })
            }
            Ok(_) | Err(TypeAError::IsolatedVertex(_)) => {}
            Err(e) => return Err(e),
        }
    }

    // (ii)
    let mut g = input.clone();
    let mut doubled = BTreeSet::new();
    for (&(i, _), cs) in g.colours.iter_mut() {
        if cs.len() == 1 {
            cs.push(cs[0] + input.d[&i]);
            doubled.insert(i);
        }
    }
    for i in doubled {
        *g.d.get_mut(&i).unwrap() *= 2;
    }
    for (&(s, t), cs) in &g.colours {
        if cs.len() != 2 || !g.colours.contains_key(&(t, s)) {
            return Err(TypeAError::NotTypeA(format!(
                "{} arrows {s} -> {t} after doubling",
                cs.len()
            )));
        }
    }
    let after_ii = g.clone();

    let nbk: Vec<VertexId> = verts
        .iter()
        .copied()
        .filter(|&i| i != k && g.colours.contains_key(&(i, k)))
        .collect();
    let mut new = g.clone();

    // (iii)
    for &i in &nbk {
        let (a, a2) = g.pair(i, k).unwrap();
        let (b, b2) = g.pair(k, i).unwrap();
        if b != 0 {
            continue;
        }
        for &j in &nbk {
            if j == i {
                continue;
            }
            let (c, c2) = g.pair(j, k).unwrap();
            let (dd, _) = g.pair(k, j).unwrap();
            if dd == 0 {
                continue;
            }
            let d_i = b2 + a2 - a;
            for ((s, t), add, m) in [
                ((i, j), [dd, dd + a2 - a], d_i),
                ((j, i), [c, c2], g.d[&j]),
            ] {
                let mut cur = new.colours.get(&(s, t)).cloned().unwrap_or_default();
                cur.extend(add);
                let cur: Vec<i64> = cur.into_iter().map(|x| x.rem_euclid(m)).collect();
                let cur = cancel_adjacent(cur, m);
                if cur.is_empty() {
                    new.colours.remove(&(s, t));
                } else {
                    new.colours.insert((s, t), sorted(cur));
                }
            }
        }
    }
    let after_iii = new.clone();

    // (iv)
    for &i in &nbk {
        let (b, b2) = g.pair(k, i).unwrap();
        if b != 0 {
            continue;
        }
        for &j in &verts {
            if j == i || j == k || g.colours.contains_key(&(j, k)) {
                continue;
            }
            if let Some((dd, _)) = g.pair(i, j) {
                new.colours.insert((i, j), sorted(vec![dd, dd + b2]));
            }
        }
    }
    let after_iv = new.clone();

    // (v)
    let mut d = g.d.clone();
    for &i in &nbk {
        let (a, a2) = g.pair(i, k).unwrap();
        let (b, b2) = g.pair(k, i).unwrap();
        let (di, dk) = (g.d[&i], g.d[&k]);
        if b != 0 {
            new.colours
                .insert((i, k), sorted(vec![(a + 1).rem_euclid(di), (a2 + 1).rem_euclid(di)]));
            new.colours
                .insert((k, i), sorted(vec![(b - 1).rem_euclid(dk), (b2 - 1).rem_euclid(dk)]));
        } else {
            let ndi = b2 + a2 - a;
            if ndi <= 0 {
                return Err(TypeAError::NotTypeA(format!(
                    "non-positive periodicity at {i}"
                )));
            }
            d.insert(i, ndi);
            new.colours
                .insert((i, k), sorted(vec![0, (a2 - a).rem_euclid(ndi)]));
            new.colours
                .insert((k, i), sorted(vec![(b2 - 1).rem_euclid(dk), (a + b2).rem_euclid(dk)]));
        }
    }
    new.d = d;
    for (&(s, _), cs) in new.colours.iter_mut() {
        let m = new.d[&s];
        *cs = sorted(cs.iter().map(|x| x.rem_euclid(m)).collect());
    }
    let after_v = new.clone();

    // (vi)
    let mut halve = BTreeSet::new();
    for (&(s, t), cs) in &new.colours {
        if cs.len() != 2 {
            return Err(TypeAError::NotTypeA(format!(
                "{} arrows {s} -> {t} before halving",
                cs.len()
            )));
        }
        let m = new.d[&s];
        if m % 2 == 0 && (cs[1] - cs[0]).rem_euclid(m) == m / 2 {
            halve.insert(s);
        }
    }
    for &i in &halve {
        let h = new.d[&i] / 2;
        for (&(s, t), cs) in new.colours.iter_mut() {
            if s != i {
                continue;
            }
            if (cs[1] - cs[0]).rem_euclid(2 * h) != h {
                return Err(TypeAError::NotTypeA(format!(
                    "arrows {s} -> {t} do not collapse when halving"
                )));
            }
            *cs = vec![cs[0].rem_euclid(h)];
        }
        new.d.insert(i, h);
    }
    Ok(TypeATrace {
        input,
        after_ii,
        after_iii,
        after_iv,
        after_v,
        result: new,
    })
}

pub fn typea_mutate(q: &ColouredQuiver, k: VertexId) -> Result<ColouredQuiver, TypeAError> {
    Ok(typea_mutate_traced(q, k)?.result.to_quiver())
}

/// All sets of pairwise noncrossing chords of an `n`-gon.
pub fn partial_triangulations(n: usize) -> Vec<Vec<(usize, usize)>> {
    let chords: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 2..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !(a == 0 && b == n - 1))
        .collect();
    let cross = |(a, b): (usize, usize), (c, d): (usize, usize)| {
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    };
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        idx: usize,
        chords: &[(usize, usize)],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
        cross: &dyn Fn((usize, usize), (usize, usize)) -> bool,
    ) {
        if idx == chords.len() {
            out.push(cur.clone());
            return;
        }
        rec(idx + 1, chords, cur, out, cross);
        if cur.iter().all(|&c| !cross(c, chords[idx])) {
            cur.push(chords[idx]);
            rec(idx + 1, chords, cur, out, cross);
            cur.pop();
        }
    }
    rec(0, &chords, &mut cur, &mut out, &cross);
    out
}

/// Compares the combinatorial mutation with geometric mutation on every
/// nonempty partial triangulation of every `n`-gon in `sizes`, at every vertex.
pub fn cross_check(sizes: std::ops::RangeInclusive<usize>) -> RunReport {
    let start = std::time::Instant::now();
    let mut report = RunReport::new("typea-cross-check");
    for n in sizes {
        let instances = partial_triangulations(n);
        let part = instances
            .par_iter()
            .filter(|r| !r.is_empty())
            .map(|r| check_instance(n, r))
            .reduce(|| RunReport::new("typea-cross-check"), RunReport::merge);
        report = report.merge(part);
    }
    report.wall_time_ms = start.elapsed().as_millis();
    report
}

fn check_instance(n: usize, chords: &[(usize, usize)]) -> RunReport {
    let mut report = RunReport::new("typea-cross-check");
    let payload = |k: VertexId, detail: String| {
        json!({ "n": n, "chords": chords, "vertex": k, "detail": detail })
    };
    let x = match builders::polygon(n, chords) {
        Ok(x) => x,
        Err(e) => {
            report.record("build", false, || payload(0, e.to_string()));
            return report;
        }
    };
    let q = match coloured_quiver(&x, None) {
        Ok(q) => q,
        Err(e) => {
            report.record("quiver", false, || payload(0, e.to_string()));
            return report;
        }
    };
    for &k in x.partial() {
        report.instances += 1;
        let geo = mutate(&x, k).and_then(|y| coloured_quiver(&y, None));
        let alg = typea_mutate(&q, k);
        let ok = matches!((&geo, &alg), (Ok(a), Ok(b)) if a == b);
        report.record("typea-equals-geometry", ok, || {
            payload(k, format!("geometry {geo:?}, algorithm {alg:?}"))
        });
    }
    report
}
