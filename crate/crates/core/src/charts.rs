//! Exact arc models on polygons and annuli.
//!
//! Disk labels run clockwise `0..n`. Annulus arcs are handled in the universal
//! cover strip: the lower line carries coordinate `a = -u` for label `u` on
//! `B0`, the upper line carries `b = v` for label `v` on `B1`, and the deck
//! transformation is `(a, b) -> (a + n0, b + n1)`. A bridging arc `B(p,q;w)`
//! lifts to `(-p, q + n1 * w)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::surface::{EdgeId, Provenance, SideId, SurfaceComplex, Triangle, TriangleId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub side: SideId,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Periodicity {
    Finite(u64),
    Infinite,
}

impl Periodicity {
    pub fn finite(self) -> Option<u64> {
        match self {
            Periodicity::Finite(d) => Some(d),
            Periodicity::Infinite => None,
        }
    }
}

impl fmt::Display for Periodicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Periodicity::Finite(d) => write!(f, "{d}"),
            Periodicity::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid arc {0}")]
    InvalidArc(String),
    #[error("arcs {0} and {1} cross")]
    CrossingInput(ChartArc, ChartArc),
    #[error("arc {0} does not belong to this kind of chart")]
    WrongChart(ChartArc),
    #[error("cannot parse arc literal {0:?}")]
    Parse(String),
    #[error("arcs do not triangulate the chart")]
    NotTriangulation,
    #[error("component has genus {genus} and {boundaries} boundary components")]
    Unsupported { genus: u32, boundaries: usize },
}

/// Chord `{i, j}` of a polygon, stored with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiskArc {
    i: usize,
    j: usize,
}

impl DiskArc {
    pub fn new(x: usize, y: usize) -> Self {
        DiskArc {
            i: x.min(y),
            j: x.max(y),
        }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnnulusArc {
    Bridging { p: usize, q: usize, w: i64 },
    /// The clockwise-open interval from `p` to `q` on `B_boundary` is the
    /// disk side. `p == q` is a loop.
    Peripheral { boundary: usize, p: usize, q: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChartArc {
    Disk(DiskArc),
    Annulus(AnnulusArc),
}

impl fmt::Display for ChartArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartArc::Disk(a) => write!(f, "D{{{},{}}}", a.i, a.j),
            ChartArc::Annulus(AnnulusArc::Bridging { p, q, w }) => write!(f, "B({p},{q};{w})"),
            ChartArc::Annulus(AnnulusArc::Peripheral { boundary, p, q }) => {
                write!(f, "P({boundary};{p},{q})")
            }
        }
    }
}

impl FromStr for ChartArc {
    type Err = ChartError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ChartError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = |open: char, close: char| -> Option<&str> {
            t.get(1..)?.strip_prefix(open)?.strip_suffix(close)
        };
        let nums = |x: &str| -> Option<Vec<i64>> {
            x.split([',', ';']).map(|n| n.parse().ok()).collect()
        };
        let v = match t.chars().next() {
            Some('D') => nums(body('{', '}').ok_or_else(err)?),
            Some('B') | Some('P') => nums(body('(', ')').ok_or_else(err)?),
            _ => None,
        }
        .ok_or_else(err)?;
        if v.len() != 3 && !(t.starts_with('D') && v.len() == 2) {
            return Err(err());
        }
        let u = |x: i64| usize::try_from(x).map_err(|_| err());
        match t.as_bytes()[0] {
            b'D' => Ok(ChartArc::Disk(DiskArc::new(u(v[0])?, u(v[1])?))),
            b'B' => Ok(ChartArc::Annulus(AnnulusArc::Bridging {
                p: u(v[0])?,
                q: u(v[1])?,
                w: v[2],
            })),
            _ => Ok(ChartArc::Annulus(AnnulusArc::Peripheral {
                boundary: u(v[0])?,
                p: u(v[1])?,
                q: u(v[2])?,
            })),
        }
    }
}

/// A side of a chart triangle: a boundary segment or an arc (index into the
/// arc list the triangles were computed from).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideRef {
    Segment { boundary: usize, index: usize },
    Arc(usize),
}

/// Fresh-id source for building complexes.
#[derive(Clone, Debug)]
pub struct IdAlloc {
    next_side: SideId,
    next_triangle: TriangleId,
}

impl IdAlloc {
    pub fn new(next_side: SideId, next_triangle: TriangleId) -> Self {
        IdAlloc {
            next_side,
            next_triangle,
        }
    }

    /// Starts above every id used in `x`.
    pub fn above(x: &SurfaceComplex) -> Self {
        IdAlloc {
            next_side: x.max_side_id().map_or(0, |s| s + 1),
            next_triangle: x.max_triangle_id().map_or(0, |t| t + 1),
        }
    }

    pub fn side(&mut self) -> SideId {
        self.next_side += 1;
        self.next_side - 1
    }

    pub fn triangle(&mut self) -> TriangleId {
        self.next_triangle += 1;
        self.next_triangle - 1
    }
}

fn rem(x: i64, n: usize) -> usize {
    x.rem_euclid(n as i64) as usize
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn polygon_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let (i, j) = a;
    let (k, l) = b;
    (i < k && k < j && j < l) || (k < i && i < l && l < j)
}

/// Greedily adds chords of an `m`-gon until the set is maximal.
fn complete_polygon(m: usize, chords: &mut Vec<(usize, usize)>) {
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            if chords.contains(&(i, j)) {
                continue;
            }
            if chords.iter().all(|&c| !polygon_cross(c, (i, j))) {
                chords.push((i, j));
            }
        }
    }
}

/// Triangles of a triangulated `m`-gon as clockwise vertex triples.
fn polygon_triangles(
    m: usize,
    chords: &[(usize, usize)],
) -> Result<Vec<[usize; 3]>, ChartError> {
    let mut edges: BTreeSet<(usize, usize)> = chords.iter().copied().collect();
    for i in 0..m - 1 {
        edges.insert((i, i + 1));
    }
    edges.insert((0, m - 1));
    let mut out = Vec::new();
    let mut stack = vec![(0usize, m - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi - lo < 2 {
            continue;
        }
        let apex = (lo + 1..hi)
            .find(|&v| edges.contains(&(lo, v)) && edges.contains(&(v, hi)))
            .ok_or(ChartError::NotTriangulation)?;
        out.push([lo, apex, hi]);
        stack.push((lo, apex));
        stack.push((apex, hi));
    }
    if out.len() != m - 2 {
        return Err(ChartError::NotTriangulation);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskChart {
    segments: Vec<Segment>,
}

impl DiskChart {
    /// Polygon whose segment `k` is side `k` with its own provenance.
    pub fn new(n: usize) -> Result<Self, ChartError> {
        Self::from_segments(
            (0..n as SideId)
                .map(|k| Segment {
                    side: k,
                    provenance: Provenance::OriginalBoundary(k),
                })
                .collect(),
        )
    }

    pub fn from_segments(segments: Vec<Segment>) -> Result<Self, ChartError> {
        if segments.len() < 4 {
            return Err(ChartError::InvalidChart(format!(
                "polygon with {} marked points",
                segments.len()
            )));
        }
        Ok(DiskChart { segments })
    }

    pub fn n(&self) -> usize {
        self.segments.len()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn check(&self, a: DiskArc) -> Result<(), ChartError> {
        let n = self.n();
        if a.j >= n || a.j - a.i < 2 || a.j - a.i == n - 1 {
            return Err(ChartError::InvalidArc(format!(
                "{} in a {n}-gon",
                ChartArc::Disk(a)
            )));
        }
        Ok(())
    }

    pub fn shift(&self, a: DiskArc, steps: i64) -> DiskArc {
        let n = self.n();
        DiskArc::new(rem(a.i as i64 + steps, n), rem(a.j as i64 + steps, n))
    }

    pub fn periodicity(&self, a: DiskArc) -> Periodicity {
        let n = self.n();
        if 2 * (a.j - a.i) == n {
            Periodicity::Finite(n as u64 / 2)
        } else {
            Periodicity::Finite(n as u64)
        }
    }

    pub fn crossing(&self, a: DiskArc, b: DiskArc) -> u32 {
        let shared = a.i == b.i || a.i == b.j || a.j == b.i || a.j == b.j;
        if shared {
            return 0;
        }
        let inside = |x: usize| a.i < x && x < a.j;
        (inside(b.i) != inside(b.j)) as u32
    }

    /// Provenance of the segments leaving each endpoint clockwise, smaller
    /// endpoint first.
    pub fn followers(&self, a: DiskArc) -> (Provenance, Provenance) {
        (self.segments[a.i].provenance, self.segments[a.j].provenance)
    }

    pub fn extend_to_triangulation(&self, arcs: &[DiskArc]) -> Result<Vec<DiskArc>, ChartError> {
        let mut chords: Vec<(usize, usize)> = Vec::new();
        for (x, &a) in arcs.iter().enumerate() {
            self.check(a)?;
            for &b in &arcs[..x] {
                if self.crossing(a, b) > 0 {
                    return Err(ChartError::CrossingInput(ChartArc::Disk(b), ChartArc::Disk(a)));
                }
            }
            if !chords.contains(&(a.i, a.j)) {
                chords.push((a.i, a.j));
            }
        }
        complete_polygon(self.n(), &mut chords);
        Ok(chords.into_iter().map(|(i, j)| DiskArc::new(i, j)).collect())
    }

    pub fn triangles(&self, arcs: &[DiskArc]) -> Result<Vec<[SideRef; 3]>, ChartError> {
        let n = self.n();
        let chords: Vec<(usize, usize)> = arcs.iter().map(|a| (a.i, a.j)).collect();
        let lookup: BTreeMap<(usize, usize), usize> =
            chords.iter().enumerate().map(|(x, &c)| (c, x)).collect();
        if lookup.len() != n - 3 || arcs.len() != n - 3 {
            return Err(ChartError::NotTriangulation);
        }
        let side = |x: usize, y: usize| -> SideRef {
            if y == x + 1 {
                SideRef::Segment {
                    boundary: 0,
                    index: x,
                }
            } else if x == 0 && y == n - 1 {
                SideRef::Segment {
                    boundary: 0,
                    index: n - 1,
                }
            } else {
                SideRef::Arc(lookup[&(x, y)])
            }
        };
        Ok(polygon_triangles(n, &chords)?
            .into_iter()
            .map(|[x, y, z]| [side(x, y), side(y, z), side(x, z)])
            .collect())
    }
}

/// A lift to the universal cover strip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lift {
    Bridge { a: i64, b: i64 },
    /// Interval on the lower (`boundary == 0`, `a` coordinates) or upper line.
    Arch { boundary: usize, lo: i64, hi: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusChart {
    segments: [Vec<Segment>; 2],
}

impl AnnulusChart {
    pub fn new(n0: usize, n1: usize) -> Result<Self, ChartError> {
        let seg = |k: usize| Segment {
            side: k as SideId,
            provenance: Provenance::OriginalBoundary(k as SideId),
        };
        Self::from_segments((0..n0).map(seg).collect(), (n0..n0 + n1).map(seg).collect())
    }

    pub fn from_segments(b0: Vec<Segment>, b1: Vec<Segment>) -> Result<Self, ChartError> {
        if b0.is_empty() || b1.is_empty() {
            return Err(ChartError::InvalidChart(
                "annulus boundary without marked points".into(),
            ));
        }
        Ok(AnnulusChart { segments: [b0, b1] })
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.segments[0].len(), self.segments[1].len())
    }

    pub fn segments(&self, boundary: usize) -> &[Segment] {
        &self.segments[boundary]
    }

    fn n(&self, boundary: usize) -> usize {
        self.segments[boundary].len()
    }

    pub fn check(&self, a: AnnulusArc) -> Result<(), ChartError> {
        let ok = match a {
            AnnulusArc::Bridging { p, q, .. } => p < self.n(0) && q < self.n(1),
            AnnulusArc::Peripheral { boundary, p, q } => {
                boundary < 2 && p < self.n(boundary) && q < self.n(boundary) && {
                    let n = self.n(boundary);
                    let l = if p == q { n } else { rem(q as i64 - p as i64, n) };
                    l >= 2
                }
            }
        };
        if ok {
            Ok(())
        } else {
            let (n0, n1) = self.counts();
            Err(ChartError::InvalidArc(format!(
                "{} in a ({n0},{n1}) annulus",
                ChartArc::Annulus(a)
            )))
        }
    }

    fn lift(&self, a: AnnulusArc) -> Lift {
        match a {
            AnnulusArc::Bridging { p, q, w } => Lift::Bridge {
                a: -(p as i64),
                b: q as i64 + self.n(1) as i64 * w,
            },
            AnnulusArc::Peripheral { boundary, p, q } => {
                let n = self.n(boundary);
                let l = if p == q {
                    n as i64
                } else {
                    rem(q as i64 - p as i64, n) as i64
                };
                if boundary == 0 {
                    Lift::Arch {
                        boundary,
                        lo: -(p as i64) - l,
                        hi: -(p as i64),
                    }
                } else {
                    Lift::Arch {
                        boundary,
                        lo: p as i64,
                        hi: p as i64 + l,
                    }
                }
            }
        }
    }

    fn project(&self, l: Lift) -> AnnulusArc {
        let (n0, n1) = (self.n(0) as i64, self.n(1) as i64);
        match l {
            Lift::Bridge { a, b } => {
                let p = rem(-a, n0 as usize);
                let s = (a + p as i64) / n0;
                let q = rem(b, n1 as usize);
                let t = (b - q as i64) / n1;
                AnnulusArc::Bridging { p, q, w: t - s }
            }
            Lift::Arch { boundary: 0, lo, hi } => AnnulusArc::Peripheral {
                boundary: 0,
                p: rem(-hi, n0 as usize),
                q: rem(-lo, n0 as usize),
            },
            Lift::Arch { boundary, lo, hi } => AnnulusArc::Peripheral {
                boundary,
                p: rem(lo, n1 as usize),
                q: rem(hi, n1 as usize),
            },
        }
    }

    pub fn shift(&self, a: AnnulusArc, steps: i64) -> AnnulusArc {
        let l = match self.lift(a) {
            Lift::Bridge { a, b } => Lift::Bridge {
                a: a - steps,
                b: b + steps,
            },
            Lift::Arch { boundary: 0, lo, hi } => Lift::Arch {
                boundary: 0,
                lo: lo - steps,
                hi: hi - steps,
            },
            Lift::Arch { boundary, lo, hi } => Lift::Arch {
                boundary,
                lo: lo + steps,
                hi: hi + steps,
            },
        };
        self.project(l)
    }

    pub fn periodicity(&self, a: AnnulusArc) -> Periodicity {
        match a {
            AnnulusArc::Bridging { .. } => Periodicity::Infinite,
            AnnulusArc::Peripheral { boundary, .. } => Periodicity::Finite(self.n(boundary) as u64),
        }
    }

    /// Counts deck translates of `y` crossing a fixed lift of `x`.
    pub fn crossing(&self, x: AnnulusArc, y: AnnulusArc) -> u32 {
        let (n0, n1) = (self.n(0) as i64, self.n(1) as i64);
        let strictly_in = |lo: i64, hi: i64, v: i64, n: i64| -> u32 {
            // translates v + k n with lo < v + k n < hi
            let mut c = 0;
            let mut k = floor_div(lo - v, n);
            while v + k * n < hi {
                if v + k * n > lo {
                    c += 1;
                }
                k += 1;
            }
            c
        };
        match (self.lift(x), self.lift(y)) {
            (Lift::Bridge { a: a1, b: b1 }, Lift::Bridge { a: a2, b: b2 }) => {
                let ka = floor_div(a1 - a2, n0);
                let kb = floor_div(b1 - b2, n1);
                let mut c = 0;
                for k in ka.min(kb) - 1..=ka.max(kb) + 2 {
                    if (a1 - a2 - k * n0) * (b1 - b2 - k * n1) < 0 {
                        c += 1;
                    }
                }
                c
            }
            (Lift::Arch { boundary, lo, hi }, Lift::Bridge { a, b })
            | (Lift::Bridge { a, b }, Lift::Arch { boundary, lo, hi }) => {
                if boundary == 0 {
                    strictly_in(lo, hi, a, n0)
                } else {
                    strictly_in(lo, hi, b, n1)
                }
            }
            (
                Lift::Arch {
                    boundary: e1,
                    lo: l1,
                    hi: h1,
                },
                Lift::Arch {
                    boundary: e2,
                    lo: l2,
                    hi: h2,
                },
            ) => {
                if e1 != e2 {
                    return 0;
                }
                let n = if e1 == 0 { n0 } else { n1 };
                let mut c = 0;
                for k in floor_div(l1 - h2, n) - 1..=floor_div(h1 - l2, n) + 1 {
                    let (l, h) = (l2 + k * n, h2 + k * n);
                    if (l1 < l && l < h1 && h1 < h) || (l < l1 && l1 < h && h < h1) {
                        c += 1;
                    }
                }
                c
            }
        }
    }

    /// Provenance of the segments leaving each endpoint clockwise: the `B0`
    /// endpoint first for bridging arcs, `p` then `q` for peripheral ones.
    pub fn followers(&self, a: AnnulusArc) -> (Provenance, Provenance) {
        match a {
            AnnulusArc::Bridging { p, q, .. } => (
                self.segments[0][p].provenance,
                self.segments[1][q].provenance,
            ),
            AnnulusArc::Peripheral { boundary, p, q } => (
                self.segments[boundary][p].provenance,
                self.segments[boundary][q].provenance,
            ),
        }
    }

    fn poly_size(&self) -> usize {
        self.n(0) + self.n(1) + 2
    }

    /// Polygon vertex of the fundamental domain cut out by a bridging lift
    /// `(a0, b0)`: lower vertices `a0, a0-1, .., a0-n0` are `0..=n0`, upper
    /// vertices `b0-n1, .., b0` are `n0+1..=n0+n1+1`.
    fn to_poly(&self, base: (i64, i64), l: Lift) -> Option<(usize, usize)> {
        let (n0, n1) = (self.n(0) as i64, self.n(1) as i64);
        let (a0, b0) = base;
        let lower = |a: i64| (a0 - a) as usize;
        let upper = |b: i64| (n0 + 1 + b - (b0 - n1)) as usize;
        match l {
            Lift::Bridge { a, b } => {
                let s = floor_div(a0 - a, n0);
                // both candidate translates whose lower end lies in range
                for k in [s, s - 1] {
                    let (aa, bb) = (a + k * n0, b + k * n1);
                    if a0 - n0 <= aa && aa <= a0 && b0 - n1 <= bb && bb <= b0 {
                        if (aa, bb) == (a0, b0) || (aa, bb) == (a0 - n0, b0 - n1) {
                            return None;
                        }
                        return Some((lower(aa), upper(bb)));
                    }
                }
                None
            }
            Lift::Arch { boundary: 0, lo, hi } => {
                let k = floor_div(a0 - hi, n0);
                let (l2, h2) = (lo + k * n0, hi + k * n0);
                (l2 >= a0 - n0).then(|| (lower(h2), lower(l2)))
            }
            Lift::Arch { lo, hi, .. } => {
                let k = floor_div(b0 - hi, n1);
                let (l2, h2) = (lo + k * n1, hi + k * n1);
                (l2 >= b0 - n1).then(|| (upper(l2), upper(h2)))
            }
        }
    }

    fn poly_to_arc(&self, base: (i64, i64), (x, y): (usize, usize)) -> AnnulusArc {
        let n0 = self.n(0);
        let (a0, b0) = base;
        let n1 = self.n(1) as i64;
        let a_of = |i: usize| a0 - i as i64;
        let b_of = |i: usize| b0 - n1 + (i - n0 - 1) as i64;
        let (i, j) = (x.min(y), x.max(y));
        let l = if j <= n0 {
            Lift::Arch {
                boundary: 0,
                lo: a_of(j),
                hi: a_of(i),
            }
        } else if i > n0 {
            Lift::Arch {
                boundary: 1,
                lo: b_of(i),
                hi: b_of(j),
            }
        } else {
            Lift::Bridge {
                a: a_of(i),
                b: b_of(j),
            }
        };
        self.project(l)
    }

    fn check_noncrossing(&self, arcs: &[AnnulusArc]) -> Result<Vec<AnnulusArc>, ChartError> {
        let mut out: Vec<AnnulusArc> = Vec::new();
        for &a in arcs {
            self.check(a)?;
            for &b in &out {
                if self.crossing(a, b) > 0 {
                    return Err(ChartError::CrossingInput(
                        ChartArc::Annulus(b),
                        ChartArc::Annulus(a),
                    ));
                }
            }
            if !out.contains(&a) {
                out.push(a);
            }
        }
        Ok(out)
    }

    pub fn extend_to_triangulation(
        &self,
        arcs: &[AnnulusArc],
    ) -> Result<Vec<AnnulusArc>, ChartError> {
        let mut out = self.check_noncrossing(arcs)?;
        let beta = match out
            .iter()
            .find(|a| matches!(a, AnnulusArc::Bridging { .. }))
        {
            Some(&b) => b,
            None => {
                let free = |boundary: usize| {
                    (0..self.n(boundary)).find(|&v| {
                        out.iter().all(|&a| match a {
                            AnnulusArc::Peripheral { boundary: e, p, q } if e == boundary => {
                                let n = self.n(e);
                                let l = if p == q {
                                    n as i64
                                } else {
                                    rem(q as i64 - p as i64, n) as i64
                                };
                                let off = (v as i64 - p as i64).rem_euclid(n as i64);
                                !(0 < off && off < l)
                            }
                            _ => true,
                        })
                    })
                };
                let b = AnnulusArc::Bridging {
                    p: free(0).ok_or(ChartError::NotTriangulation)?,
                    q: free(1).ok_or(ChartError::NotTriangulation)?,
                    w: 0,
                };
                out.insert(0, b);
                b
            }
        };
        let base = match self.lift(beta) {
            Lift::Bridge { a, b } => (a, b),
            Lift::Arch { .. } => unreachable!(),
        };
        let m = self.poly_size();
        let mut chords = Vec::new();
        for &a in &out {
            if a == beta {
                continue;
            }
            let c = self.to_poly(base, self.lift(a)).ok_or(ChartError::CrossingInput(
                ChartArc::Annulus(beta),
                ChartArc::Annulus(a),
            ))?;
            chords.push((c.0.min(c.1), c.0.max(c.1)));
        }
        let given = chords.len();
        complete_polygon(m, &mut chords);
        for &c in &chords[given..] {
            out.push(self.poly_to_arc(base, c));
        }
        Ok(out)
    }

    pub fn triangles(&self, arcs: &[AnnulusArc]) -> Result<Vec<[SideRef; 3]>, ChartError> {
        let (n0, n1) = self.counts();
        if arcs.len() != n0 + n1 {
            return Err(ChartError::NotTriangulation);
        }
        let bi = arcs
            .iter()
            .position(|a| matches!(a, AnnulusArc::Bridging { .. }))
            .ok_or(ChartError::NotTriangulation)?;
        let base = match self.lift(arcs[bi]) {
            Lift::Bridge { a, b } => (a, b),
            Lift::Arch { .. } => unreachable!(),
        };
        let (p0, q0) = (rem(-base.0, n0), rem(base.1, n1));
        let m = self.poly_size();
        let mut lookup = BTreeMap::new();
        let mut chords = Vec::new();
        for (x, &a) in arcs.iter().enumerate() {
            if x == bi {
                continue;
            }
            let c = self
                .to_poly(base, self.lift(a))
                .ok_or(ChartError::NotTriangulation)?;
            let c = (c.0.min(c.1), c.0.max(c.1));
            if lookup.insert(c, x).is_some() {
                return Err(ChartError::NotTriangulation);
            }
            chords.push(c);
        }
        let side = |x: usize, y: usize| -> SideRef {
            if y == x + 1 && x < n0 {
                SideRef::Segment {
                    boundary: 0,
                    index: (p0 + x) % n0,
                }
            } else if y == x + 1 && x == n0 {
                SideRef::Arc(bi)
            } else if y == x + 1 {
                SideRef::Segment {
                    boundary: 1,
                    index: (q0 + x - n0 - 1) % n1,
                }
            } else if x == 0 && y == m - 1 {
                SideRef::Arc(bi)
            } else {
                SideRef::Arc(lookup[&(x, y)])
            }
        };
        Ok(polygon_triangles(m, &chords)?
            .into_iter()
            .map(|[x, y, z]| [side(x, y), side(y, z), side(x, z)])
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chart {
    Disk(DiskChart),
    Annulus(AnnulusChart),
}

impl Chart {
    pub fn check(&self, a: ChartArc) -> Result<(), ChartError> {
        match (self, a) {
            (Chart::Disk(c), ChartArc::Disk(x)) => c.check(x),
            (Chart::Annulus(c), ChartArc::Annulus(x)) => c.check(x),
            _ => Err(ChartError::WrongChart(a)),
        }
    }

    pub fn shift(&self, a: ChartArc, steps: i64) -> Result<ChartArc, ChartError> {
        match (self, a) {
            (Chart::Disk(c), ChartArc::Disk(x)) => Ok(ChartArc::Disk(c.shift(x, steps))),
            (Chart::Annulus(c), ChartArc::Annulus(x)) => Ok(ChartArc::Annulus(c.shift(x, steps))),
            _ => Err(ChartError::WrongChart(a)),
        }
    }

    pub fn periodicity(&self, a: ChartArc) -> Result<Periodicity, ChartError> {
        match (self, a) {
            (Chart::Disk(c), ChartArc::Disk(x)) => Ok(c.periodicity(x)),
            (Chart::Annulus(c), ChartArc::Annulus(x)) => Ok(c.periodicity(x)),
            _ => Err(ChartError::WrongChart(a)),
        }
    }

    pub fn crossing(&self, a: ChartArc, b: ChartArc) -> Result<u32, ChartError> {
        match (self, a, b) {
            (Chart::Disk(c), ChartArc::Disk(x), ChartArc::Disk(y)) => Ok(c.crossing(x, y)),
            (Chart::Annulus(c), ChartArc::Annulus(x), ChartArc::Annulus(y)) => {
                Ok(c.crossing(x, y))
            }
            (Chart::Disk(_), ChartArc::Disk(_), _) | (Chart::Annulus(_), ChartArc::Annulus(_), _) => {
                Err(ChartError::WrongChart(b))
            }
            _ => Err(ChartError::WrongChart(a)),
        }
    }

    pub fn followers(&self, a: ChartArc) -> Result<(Provenance, Provenance), ChartError> {
        match (self, a) {
            (Chart::Disk(c), ChartArc::Disk(x)) => Ok(c.followers(x)),
            (Chart::Annulus(c), ChartArc::Annulus(x)) => Ok(c.followers(x)),
            _ => Err(ChartError::WrongChart(a)),
        }
    }

    /// `6g + 3b + c - 6` for the chart surface.
    pub fn triangulation_size(&self) -> usize {
        match self {
            Chart::Disk(c) => c.n() - 3,
            Chart::Annulus(c) => c.counts().0 + c.counts().1,
        }
    }

    pub fn extend_to_triangulation(&self, arcs: &[ChartArc]) -> Result<Vec<ChartArc>, ChartError> {
        match self {
            Chart::Disk(c) => {
                let xs = arcs
                    .iter()
                    .map(|&a| match a {
                        ChartArc::Disk(x) => Ok(x),
                        _ => Err(ChartError::WrongChart(a)),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(c
                    .extend_to_triangulation(&xs)?
                    .into_iter()
                    .map(ChartArc::Disk)
                    .collect())
            }
            Chart::Annulus(c) => {
                let xs = arcs
                    .iter()
                    .map(|&a| match a {
                        ChartArc::Annulus(x) => Ok(x),
                        _ => Err(ChartError::WrongChart(a)),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(c
                    .extend_to_triangulation(&xs)?
                    .into_iter()
                    .map(ChartArc::Annulus)
                    .collect())
            }
        }
    }

    pub fn triangles(&self, arcs: &[ChartArc]) -> Result<Vec<[SideRef; 3]>, ChartError> {
        match self {
            Chart::Disk(c) => {
                let xs = arcs
                    .iter()
                    .map(|&a| match a {
                        ChartArc::Disk(x) => Ok(x),
                        _ => Err(ChartError::WrongChart(a)),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                c.triangles(&xs)
            }
            Chart::Annulus(c) => {
                let xs = arcs
                    .iter()
                    .map(|&a| match a {
                        ChartArc::Annulus(x) => Ok(x),
                        _ => Err(ChartError::WrongChart(a)),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                c.triangles(&xs)
            }
        }
    }

    fn segment(&self, boundary: usize, index: usize) -> Segment {
        match self {
            Chart::Disk(c) => c.segments[index],
            Chart::Annulus(c) => c.segments[boundary][index],
        }
    }

    pub fn all_segments(&self) -> Vec<Segment> {
        match self {
            Chart::Disk(c) => c.segments.clone(),
            Chart::Annulus(c) => c.segments.concat(),
        }
    }

    /// Builds a complex from a triangulation of the chart. Boundary sides reuse
    /// the segment side ids and provenance. The first side of arc `x` is
    /// `first_side[x]` when given; all other ids come from `alloc`. Returns the
    /// complex and the edge id of every arc.
    pub fn to_complex(
        &self,
        arcs: &[ChartArc],
        first_side: &BTreeMap<usize, SideId>,
        alloc: &mut IdAlloc,
    ) -> Result<(SurfaceComplex, Vec<EdgeId>), ChartError> {
        let tris = self.triangles(arcs)?;
        let mut seen: BTreeMap<usize, SideId> = BTreeMap::new();
        let mut gluing = Vec::new();
        let mut triangles = Vec::new();
        let mut edge_ids = vec![0; arcs.len()];
        for t in tris {
            let mut sides = [0; 3];
            for (k, r) in t.iter().enumerate() {
                sides[k] = match *r {
                    SideRef::Segment { boundary, index } => self.segment(boundary, index).side,
                    SideRef::Arc(x) => match seen.get(&x) {
                        Some(&s) => {
                            let s2 = alloc.side();
                            gluing.push((s, s2));
                            edge_ids[x] = s.min(s2);
                            s2
                        }
                        None => {
                            let s = first_side.get(&x).copied().unwrap_or_else(|| alloc.side());
                            seen.insert(x, s);
                            s
                        }
                    },
                };
            }
            triangles.push(Triangle {
                id: alloc.triangle(),
                sides,
            });
        }
        let x = SurfaceComplex::new(triangles, &gluing, [])
            .and_then(|x| {
                x.with_provenance(
                    self.all_segments()
                        .into_iter()
                        .map(|s| (s.side, s.provenance)),
                )
            })
            .map_err(|e| ChartError::InvalidChart(e.to_string()))?;
        Ok((x, edge_ids))
    }

    /// Coordinatizes a connected disk or annulus complex. Returns the chart and
    /// the chart image of every interior edge.
    pub fn from_component(
        comp: &SurfaceComplex,
    ) -> Result<(Chart, BTreeMap<EdgeId, ChartArc>), ChartError> {
        let class = comp
            .validate()
            .map_err(|e| ChartError::InvalidChart(e.to_string()))?;
        if class.components.len() != 1 {
            return Err(ChartError::InvalidChart(format!(
                "{} components",
                class.components.len()
            )));
        }
        let cc = &class.components[0];
        if cc.is_disk() {
            Self::disk_from_component(comp)
        } else if cc.is_annulus() {
            Self::annulus_from_component(comp)
        } else {
            Err(ChartError::Unsupported {
                genus: cc.genus,
                boundaries: cc.boundary_count,
            })
        }
    }

    fn disk_from_component(
        comp: &SurfaceComplex,
    ) -> Result<(Chart, BTreeMap<EdgeId, ChartArc>), ChartError> {
        let topo = comp.topology();
        let cycle = &topo.boundary_cycles[0];
        let mut label = BTreeMap::new();
        for (k, &s) in cycle.iter().enumerate() {
            label.insert(comp.side_ends(&topo, s).0, k);
        }
        let chart = DiskChart::from_segments(
            cycle
                .iter()
                .map(|&s| Segment {
                    side: s,
                    provenance: comp.provenance(s).unwrap(),
                })
                .collect(),
        )?;
        let arcs = comp
            .interior_edges()
            .into_iter()
            .map(|e| {
                let (x, y) = comp.side_ends(&topo, e);
                (e, ChartArc::Disk(DiskArc::new(label[&x], label[&y])))
            })
            .collect();
        Ok((Chart::Disk(chart), arcs))
    }

    fn annulus_from_component(
        comp: &SurfaceComplex,
    ) -> Result<(Chart, BTreeMap<EdgeId, ChartArc>), ChartError> {
        let topo = comp.topology();
        let b0: BTreeSet<SideId> = topo.boundary_cycles[0].iter().copied().collect();
        let cycle_of_class = |c: usize| -> usize {
            let s = topo.class_start[c].expect("unpunctured");
            usize::from(!b0.contains(&s))
        };
        let e0 = comp
            .interior_edges()
            .into_iter()
            .find(|&e| {
                let (x, y) = comp.side_ends(&topo, e);
                cycle_of_class(x) != cycle_of_class(y)
            })
            .ok_or_else(|| ChartError::InvalidChart("annulus without bridging edge".into()))?;
        let (s0, s1) = comp.edge_sides(e0).unwrap();
        let cut = comp
            .cut_keep_all(&[e0].into_iter().collect())
            .map_err(|e| ChartError::InvalidChart(e.to_string()))?;
        let ctopo = cut.topology();
        let cyc = &ctopo.boundary_cycles[0];
        let m = cyc.len();
        let is_e0 = |s: SideId| s == s0 || s == s1;
        let start = (0..m)
            .find(|&i| is_e0(cyc[i]) && b0.contains(&cyc[(i + 1) % m]))
            .ok_or_else(|| ChartError::InvalidChart("cut annulus is not a polygon".into()))?;
        let rot: Vec<SideId> = (0..m).map(|k| cyc[(start + 1 + k) % m]).collect();
        let n0 = b0.len();
        let n1 = m - n0 - 2;
        if !is_e0(rot[n0]) || !is_e0(rot[m - 1]) {
            return Err(ChartError::InvalidChart("cut annulus is not a polygon".into()));
        }
        let seg = |s: SideId| Segment {
            side: s,
            provenance: comp.provenance(s).unwrap(),
        };
        let chart = AnnulusChart::from_segments(
            rot[..n0].iter().map(|&s| seg(s)).collect(),
            rot[n0 + 1..n0 + 1 + n1].iter().map(|&s| seg(s)).collect(),
        )?;
        let mut label = BTreeMap::new();
        for (k, &s) in rot.iter().enumerate() {
            label.insert(cut.side_ends(&ctopo, s).0, k);
        }
        let mut arcs = BTreeMap::new();
        arcs.insert(
            e0,
            ChartArc::Annulus(AnnulusArc::Bridging { p: 0, q: 0, w: 0 }),
        );
        for e in cut.interior_edges() {
            let (x, y) = cut.side_ends(&ctopo, e);
            let a = chart.poly_to_arc((0, 0), (label[&x], label[&y]));
            arcs.insert(e, ChartArc::Annulus(a));
        }
        Ok((Chart::Annulus(chart), arcs))
    }
}
