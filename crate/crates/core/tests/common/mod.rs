//! Test-only oracles that work on the uncut surfaces directly.
#![allow(dead_code)]

use std::collections::BTreeMap;

/// What follows an arc at one endpoint: a chord of the partial
/// triangulation or the boundary segment starting there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Next {
    Chord(usize),
    Segment(usize),
}

fn cw(n: usize, from: usize, to: usize) -> usize {
    (to + n - from) % n
}

/// Follower at endpoint `x` of the arc `{x, y}` in an `n`-gon: among chords
/// of `others` ending at `x` with far end strictly between `x` and `y`
/// (clockwise), the one angularly closest to the arc; otherwise the segment
/// `(x, x + 1)`.
pub fn follower(n: usize, others: &[(usize, usize)], x: usize, y: usize) -> (Next, usize) {
    let span = cw(n, x, y);
    let mut best: Option<(usize, usize, usize)> = None;
    for (idx, &(a, b)) in others.iter().enumerate() {
        let z = if a == x {
            b
        } else if b == x {
            a
        } else {
            continue;
        };
        let dz = cw(n, x, z);
        if 0 < dz && dz < span && best.is_none_or(|(_, _, d)| dz > d) {
            best = Some((idx, z, dz));
        }
    }
    match best {
        Some((idx, z, _)) => (Next::Chord(idx), z),
        None => (Next::Segment(x), (x + 1) % n),
    }
}

/// Twist by composing the arc with its two followers.
pub fn twist(n: usize, others: &[(usize, usize)], arc: (usize, usize)) -> (usize, usize) {
    let (_, u) = follower(n, others, arc.0, arc.1);
    let (_, v) = follower(n, others, arc.1, arc.0);
    (u.min(v), u.max(v))
}

/// Coloured quiver of a polygon partial triangulation from followers in the
/// uncut polygon: `(periodicities, arrows (i, j, colour) -> multiplicity)`
/// with vertices numbered by chord index.
pub type Arrows = BTreeMap<(usize, usize, i64), u32>;

pub fn disk_quiver(n: usize, chords: &[(usize, usize)]) -> (Vec<u64>, Arrows) {
    let mut ds = Vec::new();
    let mut arrows = BTreeMap::new();
    for (i, &gamma) in chords.iter().enumerate() {
        let others: Vec<(usize, usize)> = chords
            .iter()
            .enumerate()
            .map(|(j, &c)| if j == i { (usize::MAX, usize::MAX) } else { c })
            .collect();
        let mut orbit = vec![gamma];
        loop {
            let next = twist(n, &others, *orbit.last().unwrap());
            if next == gamma {
                break;
            }
            orbit.push(next);
            assert!(orbit.len() <= n, "twist orbit does not close");
        }
        ds.push(orbit.len() as u64);
        for (c, &(x, y)) in orbit.iter().enumerate() {
            for (a, b) in [(x, y), (y, x)] {
                if let (Next::Chord(j), _) = follower(n, &others, a, b) {
                    *arrows.entry((i, j, c as i64)).or_insert(0) += 1;
                }
            }
        }
    }
    (ds, arrows)
}

/// A polyline lift of an annulus arc in the strip `0 <= y <= 1`: the lower
/// line carries `x = a / n0`, the upper line `x = b / n1`, and the deck
/// translation is `x -> x + 1`.
#[derive(Clone, Debug)]
pub struct Lift(pub Vec<(f64, f64)>);

/// Peripheral arcs become tents whose height grows with the square of their
/// width, so nested intervals give nested tents. Tents stay flatter than any
/// bridging segment with winding at most 3, so a shared endpoint is never a
/// crossing.
pub fn tent(lo: f64, hi: f64, upper: bool) -> Lift {
    let h = 0.02 * (hi - lo) * (hi - lo);
    let mid = (lo + hi) / 2.0 + 0.013 * (hi - lo);
    if upper {
        Lift(vec![(lo, 1.0), (mid, 1.0 - h), (hi, 1.0)])
    } else {
        Lift(vec![(lo, 0.0), (mid, h), (hi, 0.0)])
    }
}

impl Lift {
    pub fn translate(&self, k: i64) -> Lift {
        Lift(self.0.iter().map(|&(x, y)| (x + k as f64, y)).collect())
    }
}

fn seg_cross(p: (f64, f64), q: (f64, f64), r: (f64, f64), s: (f64, f64)) -> Option<(f64, f64)> {
    let d = (q.0 - p.0) * (s.1 - r.1) - (q.1 - p.1) * (s.0 - r.0);
    if d.abs() < 1e-12 {
        return None;
    }
    let t = ((r.0 - p.0) * (s.1 - r.1) - (r.1 - p.1) * (s.0 - r.0)) / d;
    let u = ((r.0 - p.0) * (q.1 - p.1) - (r.1 - p.1) * (q.0 - p.0)) / d;
    let eps = 1e-9;
    ((-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u))
        .then_some((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)))
}

/// Intersection points of two polylines away from the boundary lines.
pub fn interior_crossings(a: &Lift, b: &Lift) -> usize {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for w in a.0.windows(2) {
        for v in b.0.windows(2) {
            if let Some(p) = seg_cross(w[0], w[1], v[0], v[1]) {
                if p.1 > 1e-9
                    && p.1 < 1.0 - 1e-9
                    && !pts
                        .iter()
                        .any(|q| (q.0 - p.0).abs() < 1e-7 && (q.1 - p.1).abs() < 1e-7)
                {
                    pts.push(p);
                }
            }
        }
    }
    pts.len()
}

/// Crossings of a fixed lift of `a` with all translates of `b`. A lift
/// does not cross itself.
pub fn strip_crossings(a: &Lift, b: &Lift) -> usize {
    (-30..=30)
        .map(|k| b.translate(k))
        .filter(|t| t.0 != a.0)
        .map(|t| interior_crossings(a, &t))
        .sum()
}
