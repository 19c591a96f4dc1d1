//! Coloured quivers of partial triangulations.
//!
//! The twist of an arc is computed as the boundary shift of its image in the
//! surface cut along the other arcs of the partial triangulation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::charts::{Chart, ChartArc, ChartError, IdAlloc, Periodicity};
use crate::surface::{EdgeId, SurfaceComplex, SurfaceError};

pub type VertexId = EdgeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("reduction at arc {arc} has genus {genus} and {boundaries} boundary components")]
    UnsupportedSurface {
        arc: EdgeId,
        genus: u32,
        boundaries: usize,
    },
    #[error("vertex {vertex} has infinite periodicity and no colour window was given")]
    MissingWindow { vertex: VertexId },
    #[error("{0} is not a vertex")]
    UnknownVertex(VertexId),
    #[error("quivers have different vertex sets")]
    VertexMismatch,
    #[error("colour windows are not comparable")]
    WindowMismatch,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColouredQuiver {
    d: BTreeMap<VertexId, Periodicity>,
    arrows: BTreeMap<(VertexId, VertexId, i64), u32>,
    window: Option<(i64, i64)>,
}

impl ColouredQuiver {
    pub fn new(
        d: impl IntoIterator<Item = (VertexId, Periodicity)>,
        window: Option<(i64, i64)>,
    ) -> Self {
        ColouredQuiver {
            d: d.into_iter().collect(),
            arrows: BTreeMap::new(),
            window,
        }
    }

    /// Adds one arrow. Colours out of a finite-periodicity vertex are reduced.
    pub fn add_arrow(&mut self, src: VertexId, dst: VertexId, colour: i64) -> Result<(), QuiverError> {
        let c = match self.d.get(&src) {
            Some(Periodicity::Finite(d)) => colour.rem_euclid(*d as i64),
            Some(Periodicity::Infinite) => colour,
            None => return Err(QuiverError::UnknownVertex(src)),
        };
        if !self.d.contains_key(&dst) {
            return Err(QuiverError::UnknownVertex(dst));
        }
        *self.arrows.entry((src, dst, c)).or_insert(0) += 1;
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.d.keys().copied()
    }

    pub fn periodicities(&self) -> &BTreeMap<VertexId, Periodicity> {
        &self.d
    }

    pub fn d(&self, v: VertexId) -> Option<Periodicity> {
        self.d.get(&v).copied()
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        self.window
    }

    pub fn set_window(&mut self, window: Option<(i64, i64)>) {
        self.window = window;
    }

    /// Arrows as `((src, dst, colour), multiplicity)`.
    pub fn arrows(&self) -> impl Iterator<Item = ((VertexId, VertexId, i64), u32)> + '_ {
        self.arrows.iter().map(|(k, v)| (*k, *v))
    }

    pub fn arrow_count(&self) -> u32 {
        self.arrows.values().sum()
    }

    /// `q^{(c)}_{ij}`, with `c` read modulo `d_i` when finite.
    pub fn q(&self, i: VertexId, j: VertexId, c: i64) -> u32 {
        let c = match self.d.get(&i) {
            Some(Periodicity::Finite(d)) => c.rem_euclid(*d as i64),
            _ => c,
        };
        self.arrows.get(&(i, j, c)).copied().unwrap_or(0)
    }

    /// Colours of the arrows `i -> j`, repeated by multiplicity.
    pub fn colours(&self, i: VertexId, j: VertexId) -> Vec<i64> {
        self.arrows
            .range((i, j, i64::MIN)..=(i, j, i64::MAX))
            .flat_map(|((_, _, c), m)| std::iter::repeat_n(*c, *m as usize))
            .collect()
    }

    /// Full subquiver on the vertices outside `removed`.
    pub fn subquiver_after_cut(&self, removed: &BTreeSet<VertexId>) -> ColouredQuiver {
        let d: BTreeMap<_, _> = self
            .d
            .iter()
            .filter(|(v, _)| !removed.contains(v))
            .map(|(v, p)| (*v, *p))
            .collect();
        let arrows = self
            .arrows
            .iter()
            .filter(|((s, t, _), _)| !removed.contains(s) && !removed.contains(t))
            .map(|(k, v)| (*k, *v))
            .collect();
        let window = if d.values().any(|p| *p == Periodicity::Infinite) {
            self.window
        } else {
            None
        };
        ColouredQuiver { d, arrows, window }
    }
}

/// The cut surface seen from one arc of the partial triangulation.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub chart: Chart,
    /// Image of the arc in the chart.
    pub arc: ChartArc,
    /// Chart image of every interior edge of the arc's component.
    pub arcs: BTreeMap<EdgeId, ChartArc>,
    /// The surface cut along the other arcs, nothing removed.
    pub cut: SurfaceComplex,
    /// Triangle indices in `cut` of the arc's component.
    pub component: Vec<usize>,
}

pub fn reduction_chart(x: &SurfaceComplex, i: VertexId) -> Result<Reduction, QuiverError> {
    if !x.partial().contains(&i) {
        return Err(QuiverError::UnknownVertex(i));
    }
    let others: BTreeSet<EdgeId> = x.partial().iter().copied().filter(|&e| e != i).collect();
    let cut = x.cut_keep_all(&others)?;
    let topo = cut.topology();
    let (t, _) = cut.side_location(i).expect("arc side");
    let component = topo.components[topo.comp_of[t]].clone();
    let sub = cut.restrict(&component);
    let (chart, arcs) = Chart::from_component(&sub).map_err(|e| match e {
        ChartError::Unsupported { genus, boundaries } => QuiverError::UnsupportedSurface {
            arc: i,
            genus,
            boundaries,
        },
        e => QuiverError::Chart(e),
    })?;
    Ok(Reduction {
        arc: arcs[&i],
        chart,
        arcs,
        cut,
        component,
    })
}

/// Number of the two followers of `shift^c(γ_i)` that are copies of `γ_j`.
pub fn q_colour(x: &SurfaceComplex, i: VertexId, j: VertexId, c: i64) -> Result<u32, QuiverError> {
    let r = reduction_chart(x, i)?;
    let (f, g) = r.chart.followers(r.chart.shift(r.arc, c)?)?;
    Ok([f, g].iter().filter(|p| p.arc() == Some(j)).count() as u32)
}

pub fn coloured_quiver(
    x: &SurfaceComplex,
    window: Option<(i64, i64)>,
) -> Result<ColouredQuiver, QuiverError> {
    let mut reds = Vec::new();
    for &i in x.partial() {
        let r = reduction_chart(x, i)?;
        let d = r.chart.periodicity(r.arc)?;
        reds.push((i, r, d));
    }
    let infinite = reds.iter().any(|(_, _, d)| *d == Periodicity::Infinite);
    let mut q = ColouredQuiver::new(
        reds.iter().map(|(i, _, d)| (*i, *d)),
        if infinite { window } else { None },
    );
    for (i, r, d) in &reds {
        let colours: Vec<i64> = match d {
            Periodicity::Finite(d) => (0..*d as i64).collect(),
            Periodicity::Infinite => {
                let (lo, hi) = window.ok_or(QuiverError::MissingWindow { vertex: *i })?;
                (lo..=hi).collect()
            }
        };
        for c in colours {
            let (f, g) = r.chart.followers(r.chart.shift(r.arc, c)?)?;
            for p in [f, g] {
                if let Some(j) = p.arc() {
                    if j != *i && x.partial().contains(&j) {
                        q.add_arrow(*i, j, c)?;
                    }
                }
            }
        }
    }
    Ok(q)
}

/// `κ^{±1}` of an arc, as a chart arc of its reduction.
pub fn twist(x: &SurfaceComplex, i: VertexId, direction: i64) -> Result<ChartArc, QuiverError> {
    let r = reduction_chart(x, i)?;
    Ok(r.chart.shift(r.arc, direction)?)
}

/// Replaces `γ_k` by its twist. The new arc keeps the id `k`; the rest of the
/// chart is retriangulated with fresh filler edges and glued back.
pub fn mutate(x: &SurfaceComplex, k: VertexId) -> Result<SurfaceComplex, QuiverError> {
    let r = reduction_chart(x, k)?;
    let new_arc = r.chart.shift(r.arc, 1)?;
    let arcs = r.chart.extend_to_triangulation(&[new_arc])?;
    let idx = arcs.iter().position(|a| *a == new_arc).expect("input kept");
    let mut alloc = IdAlloc::above(x);
    let (comp, _) = r
        .chart
        .to_complex(&arcs, &[(idx, k)].into_iter().collect(), &mut alloc)?;
    let inside: BTreeSet<usize> = r.component.iter().copied().collect();
    let rest: Vec<usize> = (0..r.cut.triangles().len())
        .filter(|t| !inside.contains(t))
        .collect();
    let mut parts = vec![comp];
    if !rest.is_empty() {
        parts.insert(0, r.cut.restrict(&rest));
    }
    let others: BTreeSet<EdgeId> = x.partial().iter().copied().filter(|&e| e != k).collect();
    let glued = SurfaceComplex::disjoint_union(&parts)?.reglue(&others)?;
    let mut partial = others;
    partial.insert(k);
    Ok(glued
        .with_partial(partial)?
        .with_cut_partial(x.cut_partial().iter().copied())
        .with_removed(x.removed().to_vec()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColourFailure {
    pub src: VertexId,
    pub dst: VertexId,
    pub colour: i64,
    pub expected: u32,
    pub found: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexVerdict {
    pub vertex: VertexId,
    pub d_equal: bool,
    pub failures: Vec<ColourFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub src: VertexId,
    pub dst: VertexId,
    pub failures: Vec<ColourFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thm71Report {
    pub vertex: VertexId,
    /// `d_k = d'_k` and the colour shift on arrows out of `k`.
    pub clause_i: VertexVerdict,
    /// Vertices `j` with no 0-coloured arrow `k -> j`: `d_j` and arrows `j -> k`.
    pub clause_ii_vertices: Vec<VertexVerdict>,
    /// Pairs of such vertices: arrows `i -> j` unchanged.
    pub clause_ii_pairs: Vec<PairVerdict>,
    /// Vertices receiving a 0-coloured arrow from `k`; no claim is made.
    pub hypotheses_fail: Vec<VertexId>,
}

impl Thm71Report {
    pub fn passed(&self) -> bool {
        let ok = |v: &VertexVerdict| v.d_equal && v.failures.is_empty();
        ok(&self.clause_i)
            && self.clause_ii_vertices.iter().all(ok)
            && self.clause_ii_pairs.iter().all(|p| p.failures.is_empty())
    }

    pub fn failures(&self) -> Vec<ColourFailure> {
        let mut out = self.clause_i.failures.clone();
        for v in &self.clause_ii_vertices {
            out.extend(v.failures.iter().cloned());
        }
        for p in &self.clause_ii_pairs {
            out.extend(p.failures.iter().cloned());
        }
        out
    }
}

/// Checks the mutation rules relating `q` to `qt`, its mutation at `k`.
pub fn check_theorem71(
    q: &ColouredQuiver,
    qt: &ColouredQuiver,
    k: VertexId,
) -> Result<Thm71Report, QuiverError> {
    if q.d.keys().ne(qt.d.keys()) {
        return Err(QuiverError::VertexMismatch);
    }
    if !q.d.contains_key(&k) {
        return Err(QuiverError::UnknownVertex(k));
    }
    let window = match (q.window, qt.window) {
        (Some(a), Some(b)) if a != b => return Err(QuiverError::WindowMismatch),
        (a, b) => a.or(b),
    };
    if q.d[&k] == Periodicity::Infinite && !window.is_some_and(|(lo, hi)| lo <= 0 && 0 <= hi) {
        return Err(QuiverError::WindowMismatch);
    }
    let range = |v: VertexId| -> Option<Vec<i64>> {
        match (q.d[&v], qt.d[&v]) {
            (Periodicity::Finite(a), Periodicity::Finite(b)) if a == b => Some((0..a as i64).collect()),
            (Periodicity::Infinite, Periodicity::Infinite) => {
                window.map(|(lo, hi)| (lo + 1..hi).collect())
            }
            _ => None,
        }
    };
    let compare = |src: VertexId, dst: VertexId, shift: i64| -> Vec<ColourFailure> {
        let mut out = Vec::new();
        for c in range(src).unwrap_or_default() {
            let expected = q.q(src, dst, c + shift);
            let found = qt.q(src, dst, c);
            if expected != found {
                out.push(ColourFailure {
                    src,
                    dst,
                    colour: c,
                    expected,
                    found,
                });
            }
        }
        out
    };
    let others: Vec<VertexId> = q.d.keys().copied().filter(|&v| v != k).collect();
    let clause_i = VertexVerdict {
        vertex: k,
        d_equal: q.d[&k] == qt.d[&k],
        failures: others.iter().flat_map(|&j| compare(k, j, 1)).collect(),
    };
    let (hyp, hypotheses_fail): (Vec<VertexId>, Vec<VertexId>) =
        others.iter().partition(|&&j| q.q(k, j, 0) == 0);
    let clause_ii_vertices = hyp
        .iter()
        .map(|&j| VertexVerdict {
            vertex: j,
            d_equal: q.d[&j] == qt.d[&j],
            failures: compare(j, k, -1),
        })
        .collect();
    let mut clause_ii_pairs = Vec::new();
    for &i in &hyp {
        for &j in &hyp {
            if i != j {
                clause_ii_pairs.push(PairVerdict {
                    src: i,
                    dst: j,
                    failures: compare(i, j, 0),
                });
            }
        }
    }
    Ok(Thm71Report {
        vertex: k,
        clause_i,
        clause_ii_vertices,
        clause_ii_pairs,
        hypotheses_fail,
    })
}
