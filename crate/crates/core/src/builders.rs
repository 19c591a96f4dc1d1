//! Ready-made complexes: polygons, annuli, the two-marked-point torus and a
//! genus-two surface.

use std::collections::BTreeMap;

use crate::charts::{AnnulusArc, AnnulusChart, Chart, ChartArc, ChartError, DiskArc, DiskChart, IdAlloc, Segment};
use crate::surface::{Provenance, SideId, SurfaceComplex, SurfaceError, Triangle};

/// Builds a triangulation containing `arcs` and takes `arcs` as the partial
/// triangulation. Arc `x` becomes edge `x + 1`; boundary sides follow.
fn from_chart_arcs(
    make: impl FnOnce(u32) -> Result<Chart, ChartError>,
    arcs: Vec<ChartArc>,
) -> Result<SurfaceComplex, ChartError> {
    let m = arcs.len() as SideId;
    let chart = make(m + 1)?;
    let next = m + 1 + chart.all_segments().len() as SideId;
    let full = chart.extend_to_triangulation(&arcs)?;
    let first: BTreeMap<usize, SideId> = (0..arcs.len()).map(|x| (x, x as SideId + 1)).collect();
    let mut alloc = IdAlloc::new(next, 0);
    let (x, _) = chart.to_complex(&full, &first, &mut alloc)?;
    x.with_partial(1..=m)
        .map_err(|e| ChartError::InvalidChart(e.to_string()))
}

fn segments(range: std::ops::Range<u32>) -> Vec<Segment> {
    range
        .map(|side| Segment {
            side,
            provenance: Provenance::OriginalBoundary(side),
        })
        .collect()
}

/// `n`-gon with the given chords (clockwise labels `0..n`) as `R`.
pub fn polygon(n: usize, chords: &[(usize, usize)]) -> Result<SurfaceComplex, ChartError> {
    let arcs = chords
        .iter()
        .map(|&(a, b)| ChartArc::Disk(DiskArc::new(a, b)))
        .collect();
    from_chart_arcs(
        |s| DiskChart::from_segments(segments(s..s + n as u32)).map(Chart::Disk),
        arcs,
    )
}

/// Annulus with `n0` and `n1` marked points and the given arcs as `R`.
pub fn annulus(n0: usize, n1: usize, arcs: &[AnnulusArc]) -> Result<SurfaceComplex, ChartError> {
    let arcs = arcs.iter().copied().map(ChartArc::Annulus).collect();
    from_chart_arcs(
        |s| {
            let all = segments(s..s + (n0 + n1) as u32);
            AnnulusChart::from_segments(all[..n0].to_vec(), all[n0..].to_vec()).map(Chart::Annulus)
        },
        arcs,
    )
}

/// Fan-triangulated `n`-gon (from vertex 0) with boundary sides `k` and `l`
/// glued for each pair `(k, l)`. Polygon side `k` runs from vertex `k` to
/// `k + 1`.
pub fn polygon_gluing(n: usize, pairs: &[(usize, usize)]) -> Result<SurfaceComplex, SurfaceError> {
    if n < 3 {
        return Err(SurfaceError::MalformedGluing(format!("{n}-gon")));
    }
    // boundary side k has id k; chord (0, v) has ids n + 2v and n + 2v + 1
    let chord = |v: usize, upper: bool| (n + 2 * v + usize::from(upper)) as SideId;
    let mut triangles = Vec::new();
    let mut gluing = Vec::new();
    for v in 1..n - 1 {
        let left = if v == 1 { 0 } else { chord(v, false) };
        let right = if v + 1 == n - 1 {
            (n - 1) as SideId
        } else {
            chord(v + 1, true)
        };
        if v + 1 < n - 1 {
            gluing.push((chord(v + 1, true), chord(v + 1, false)));
        }
        // corners 0, v, v+1 clockwise; side 2 runs from v+1 back to 0
        triangles.push(Triangle {
            id: (v - 1) as u32,
            sides: [left, v as SideId, right],
        });
    }
    for &(k, l) in pairs {
        if k >= n || l >= n {
            return Err(SurfaceError::MalformedGluing(format!("side pair ({k},{l})")));
        }
        gluing.push((k as SideId, l as SideId));
    }
    SurfaceComplex::new(triangles, &gluing, [])
}

/// Genus two, one boundary component with one marked point, fully
/// triangulated by 10 arcs.
pub fn genus2() -> SurfaceComplex {
    polygon_gluing(9, &[(0, 2), (1, 3), (4, 6), (5, 7)]).expect("valid gluing")
}

/// Torus with one boundary component carrying two marked points,
/// triangulated by arcs 1..=5 with `R = {1, 2, 3}`.
pub fn torus() -> SurfaceComplex {
    let t = |id, sides| Triangle { id, sides };
    SurfaceComplex::new(
        vec![
            t(1, [4, 3, 1]),
            t(2, [2, 5, 11]),
            t(3, [15, 13, 20]),
            t(4, [12, 14, 21]),
        ],
        &[(1, 11), (2, 12), (3, 13), (4, 14), (5, 15)],
        [1, 2, 3],
    )
    .expect("valid torus")
}
