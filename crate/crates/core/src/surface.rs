//! Oriented glued-triangle complexes for unpunctured marked surfaces.
//!
//! Each triangle lists its three sides clockwise. Side `k` of a triangle runs
//! from corner `k` to corner `k + 1`. Gluing two sides always reverses direction,
//! so the start of one side is identified with the end of the other.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type SideId = u32;
pub type EdgeId = u32;
pub type TriangleId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle {
    pub id: TriangleId,
    pub sides: [SideId; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcSide {
    Left,
    Right,
}

impl fmt::Display for ArcSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcSide::Left => f.write_str("left"),
            ArcSide::Right => f.write_str("right"),
        }
    }
}

/// Where a boundary side came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    OriginalBoundary(u32),
    ArcCopy { arc: EdgeId, side: ArcSide },
}

impl Provenance {
    pub fn arc(&self) -> Option<EdgeId> {
        match *self {
            Provenance::ArcCopy { arc, .. } => Some(arc),
            Provenance::OriginalBoundary(_) => None,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::OriginalBoundary(s) => write!(f, "segment {s}"),
            Provenance::ArcCopy { arc, side } => write!(f, "copy of arc {arc} ({side})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForbiddenKind {
    Monogon,
    Digon,
    Triangle,
}

impl fmt::Display for ForbiddenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForbiddenKind::Monogon => f.write_str("monogon"),
            ForbiddenKind::Digon => f.write_str("digon"),
            ForbiddenKind::Triangle => f.write_str("triangle"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("malformed gluing: {0}")]
    MalformedGluing(String),
    #[error("surface has no triangles")]
    Empty,
    #[error("interior vertex at the start of side {side}")]
    PuncturedVertex { side: SideId },
    #[error("component containing triangle {triangle} is a {kind}")]
    ForbiddenComponent { triangle: TriangleId, kind: ForbiddenKind },
    #[error("component containing triangle {triangle} has {found} interior edges, expected {expected}")]
    ArcCountMismatch {
        triangle: TriangleId,
        found: usize,
        expected: i64,
    },
    #[error("unknown interior edge {0}")]
    UnknownEdge(EdgeId),
    #[error("arc {arc} has no {side} copy on the boundary")]
    MissingCopy { arc: EdgeId, side: ArcSide },
    #[error("edge {0} borders a single triangle twice")]
    NotFlippable(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentClass {
    pub triangles: Vec<TriangleId>,
    pub genus: u32,
    pub boundary_count: usize,
    pub marked_per_boundary: Vec<usize>,
    pub marked_points: usize,
    pub euler_characteristic: i64,
    pub interior_edges: usize,
}

impl ComponentClass {
    pub fn is_disk(&self) -> bool {
        self.genus == 0 && self.boundary_count == 1
    }

    pub fn is_annulus(&self) -> bool {
        self.genus == 0 && self.boundary_count == 2
    }

    /// `6g + 3b + c - 6`.
    pub fn expected_arcs(&self) -> i64 {
        6 * self.genus as i64 + 3 * self.boundary_count as i64 + self.marked_points as i64 - 6
    }
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g={} b={} c={} n={}",
            self.genus, self.boundary_count, self.marked_points, self.interior_edges
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub components: Vec<ComponentClass>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A triangle component dropped by `cut`, kept so callers can see which arc
/// copies disappeared with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovedComponent {
    pub triangle: Triangle,
    pub boundary: Vec<(SideId, Provenance)>,
}

impl RemovedComponent {
    pub fn lost_copies(&self) -> impl Iterator<Item = (EdgeId, ArcSide)> + '_ {
        self.boundary.iter().filter_map(|(_, p)| match *p {
            Provenance::ArcCopy { arc, side } => Some((arc, side)),
            Provenance::OriginalBoundary(_) => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComplex {
    triangles: Vec<Triangle>,
    partner: BTreeMap<SideId, SideId>,
    partial: BTreeSet<EdgeId>,
    provenance: BTreeMap<SideId, Provenance>,
    cut_partial: BTreeSet<EdgeId>,
    removed: Vec<RemovedComponent>,
    loc: BTreeMap<SideId, (usize, usize)>,
}

/// Corner classes, boundary cycles and connected components.
#[derive(Clone, Debug)]
pub(crate) struct Topology {
    pub corner_class: Vec<[usize; 3]>,
    /// Boundary side starting at each vertex class, if any.
    pub class_start: Vec<Option<SideId>>,
    /// Each cycle starts at its smallest side id.
    pub boundary_cycles: Vec<Vec<SideId>>,
    pub comp_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl SurfaceComplex {
    pub fn new(
        triangles: Vec<Triangle>,
        gluing: &[(SideId, SideId)],
        partial: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, SurfaceError> {
        let mut ids = BTreeSet::new();
        for t in &triangles {
            if !ids.insert(t.id) {
                return Err(SurfaceError::MalformedGluing(format!(
                    "triangle id {} used twice",
                    t.id
                )));
            }
        }
        let loc = Self::index(&triangles)?;
        let mut partner = BTreeMap::new();
        for &(a, b) in gluing {
            if a == b {
                return Err(SurfaceError::MalformedGluing(format!(
                    "side {a} glued to itself"
                )));
            }
            for s in [a, b] {
                if !loc.contains_key(&s) {
                    return Err(SurfaceError::MalformedGluing(format!("unknown side {s}")));
                }
                if partner.contains_key(&s) {
                    return Err(SurfaceError::MalformedGluing(format!(
                        "side {s} glued twice"
                    )));
                }
            }
            partner.insert(a, b);
            partner.insert(b, a);
        }
        let mut out = SurfaceComplex {
            triangles,
            partner,
            partial: BTreeSet::new(),
            provenance: BTreeMap::new(),
            cut_partial: BTreeSet::new(),
            removed: Vec::new(),
            loc,
        };
        out = out.with_partial(partial)?;
        Ok(out)
    }

    fn index(triangles: &[Triangle]) -> Result<BTreeMap<SideId, (usize, usize)>, SurfaceError> {
        let mut loc = BTreeMap::new();
        for (ti, t) in triangles.iter().enumerate() {
            for (k, &s) in t.sides.iter().enumerate() {
                if loc.insert(s, (ti, k)).is_some() {
                    return Err(SurfaceError::MalformedGluing(format!(
                        "side {s} occurs twice"
                    )));
                }
            }
        }
        Ok(loc)
    }

    /// Replaces the partial triangulation.
    pub fn with_partial(
        mut self,
        partial: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, SurfaceError> {
        let mut set = BTreeSet::new();
        for e in partial {
            if self.edge_sides(e).is_none() {
                return Err(SurfaceError::UnknownEdge(e));
            }
            set.insert(e);
        }
        self.partial = set;
        Ok(self)
    }

    /// Attaches provenance labels to boundary sides.
    pub fn with_provenance(
        mut self,
        labels: impl IntoIterator<Item = (SideId, Provenance)>,
    ) -> Result<Self, SurfaceError> {
        for (s, p) in labels {
            if !self.loc.contains_key(&s) || self.partner.contains_key(&s) {
                return Err(SurfaceError::MalformedGluing(format!(
                    "provenance given for non-boundary side {s}"
                )));
            }
            if p == Provenance::OriginalBoundary(s) {
                self.provenance.remove(&s);
            } else {
                self.provenance.insert(s, p);
            }
        }
        Ok(self)
    }

    pub(crate) fn with_cut_partial(mut self, arcs: impl IntoIterator<Item = EdgeId>) -> Self {
        self.cut_partial = arcs.into_iter().collect();
        self
    }

    pub(crate) fn with_removed(mut self, removed: Vec<RemovedComponent>) -> Self {
        self.removed = removed;
        self
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn partial(&self) -> &BTreeSet<EdgeId> {
        &self.partial
    }

    /// Arcs cut away while they belonged to the partial triangulation.
    pub fn cut_partial(&self) -> &BTreeSet<EdgeId> {
        &self.cut_partial
    }

    pub fn removed(&self) -> &[RemovedComponent] {
        &self.removed
    }

    pub fn partner(&self, s: SideId) -> Option<SideId> {
        self.partner.get(&s).copied()
    }

    pub fn contains_side(&self, s: SideId) -> bool {
        self.loc.contains_key(&s)
    }

    /// Interior edge id of a glued side: the smaller of the two side ids.
    pub fn edge_of(&self, s: SideId) -> Option<EdgeId> {
        self.partner(s).map(|p| p.min(s))
    }

    pub fn edge_sides(&self, e: EdgeId) -> Option<(SideId, SideId)> {
        match self.partner(e) {
            Some(p) if p > e => Some((e, p)),
            _ => None,
        }
    }

    pub fn interior_edges(&self) -> BTreeSet<EdgeId> {
        self.partner
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(a, _)| *a)
            .collect()
    }

    pub fn gluing_pairs(&self) -> Vec<(SideId, SideId)> {
        self.partner
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(a, b)| (*a, *b))
            .collect()
    }

    pub fn boundary_sides(&self) -> Vec<SideId> {
        self.loc
            .keys()
            .filter(|s| !self.partner.contains_key(s))
            .copied()
            .collect()
    }

    pub fn provenance(&self, s: SideId) -> Option<Provenance> {
        if !self.loc.contains_key(&s) || self.partner.contains_key(&s) {
            return None;
        }
        Some(
            self.provenance
                .get(&s)
                .copied()
                .unwrap_or(Provenance::OriginalBoundary(s)),
        )
    }

    pub fn boundary_provenance(&self) -> BTreeMap<SideId, Provenance> {
        self.boundary_sides()
            .into_iter()
            .map(|s| (s, self.provenance(s).unwrap()))
            .collect()
    }

    /// True when some boundary side carries a label other than its own segment.
    pub fn has_custom_provenance(&self) -> bool {
        !self.provenance.is_empty()
    }

    pub fn side_location(&self, s: SideId) -> Option<(usize, usize)> {
        self.loc.get(&s).copied()
    }

    pub fn max_side_id(&self) -> Option<SideId> {
        self.loc.keys().next_back().copied()
    }

    pub fn max_triangle_id(&self) -> Option<TriangleId> {
        self.triangles.iter().map(|t| t.id).max()
    }

    pub(crate) fn topology(&self) -> Topology {
        let f = self.triangles.len();
        let mut uf = UnionFind::new(3 * f);
        let mut tuf = UnionFind::new(f);
        for (&s, &p) in &self.partner {
            if s > p {
                continue;
            }
            let (t, k) = self.loc[&s];
            let (t2, k2) = self.loc[&p];
            uf.union(3 * t + k, 3 * t2 + (k2 + 1) % 3);
            uf.union(3 * t + (k + 1) % 3, 3 * t2 + k2);
            tuf.union(t, t2);
        }
        let mut dense = BTreeMap::new();
        let mut corner_class = vec![[0usize; 3]; f];
        for (t, classes) in corner_class.iter_mut().enumerate() {
            for (k, class) in classes.iter_mut().enumerate() {
                let r = uf.find(3 * t + k);
                let next = dense.len();
                *class = *dense.entry(r).or_insert(next);
            }
        }
        let class_count = dense.len();
        let mut class_start = vec![None; class_count];
        let bsides = self.boundary_sides();
        for &s in &bsides {
            let (t, k) = self.loc[&s];
            class_start[corner_class[t][k]] = Some(s);
        }
        let mut seen = BTreeSet::new();
        let mut boundary_cycles = Vec::new();
        for &s in &bsides {
            if seen.contains(&s) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = s;
            while seen.insert(x) {
                cycle.push(x);
                let (t, k) = self.loc[&x];
                match class_start[corner_class[t][(k + 1) % 3]] {
                    Some(n) => x = n,
                    None => break,
                }
            }
            boundary_cycles.push(cycle);
        }
        let mut comp_index = BTreeMap::new();
        let mut comp_of = vec![0; f];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for (t, slot) in comp_of.iter_mut().enumerate() {
            let r = tuf.find(t);
            let next = comp_index.len();
            let c = *comp_index.entry(r).or_insert(next);
            if c == components.len() {
                components.push(Vec::new());
            }
            components[c].push(t);
            *slot = c;
        }
        Topology {
            corner_class,

            class_start,
            boundary_cycles,
            comp_of,
            components,
        }
    }

    pub fn validate(&self) -> Result<Classification, SurfaceError> {
        if self.triangles.is_empty() {
            return Err(SurfaceError::Empty);
        }
        let topo = self.topology();
        for t in 0..self.triangles.len() {
            for k in 0..3 {
                if topo.class_start[topo.corner_class[t][k]].is_none() {
                    return Err(SurfaceError::PuncturedVertex {
                        side: self.triangles[t].sides[k],
                    });
                }
            }
        }
        let mut components = Vec::new();
        for comp in &topo.components {
            components.push(self.classify_component(&topo, comp)?);
        }
        Ok(Classification { components })
    }

    fn classify_component(
        &self,
        topo: &Topology,
        comp: &[usize],
    ) -> Result<ComponentClass, SurfaceError> {
        let first = self.triangles[comp[0]].id;
        let ci = topo.comp_of[comp[0]];
        let mut classes = BTreeSet::new();
        let mut interior = 0usize;
        let mut boundary = 0usize;
        for &t in comp {
            for k in 0..3 {
                classes.insert(topo.corner_class[t][k]);
                match self.partner(self.triangles[t].sides[k]) {
                    Some(_) => interior += 1,
                    None => boundary += 1,
                }
            }
        }
        let interior = interior / 2;
        let marked_per_boundary: Vec<usize> = topo
            .boundary_cycles
            .iter()
            .filter(|c| topo.comp_of[self.loc[&c[0]].0] == ci)
            .map(|c| c.len())
            .collect();
        let v = classes.len() as i64;
        let chi = v - (interior + boundary) as i64 + comp.len() as i64;
        let b = marked_per_boundary.len();
        let two_g = 2 - chi - b as i64;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(SurfaceError::MalformedGluing(format!(
                "component containing triangle {first} has Euler characteristic {chi} with {b} boundary cycles"
            )));
        }
        let class = ComponentClass {
            triangles: comp.iter().map(|&t| self.triangles[t].id).collect(),
            genus: (two_g / 2) as u32,
            boundary_count: b,
            marked_per_boundary,
            marked_points: classes.len(),
            euler_characteristic: chi,
            interior_edges: interior,
        };
        if class.genus == 0 && b == 1 && class.marked_points <= 3 {
            let kind = match class.marked_points {
                1 => ForbiddenKind::Monogon,
                2 => ForbiddenKind::Digon,
                _ => ForbiddenKind::Triangle,
            };
            return Err(SurfaceError::ForbiddenComponent {
                triangle: first,
                kind,
            });
        }
        if class.expected_arcs() != interior as i64 {
            return Err(SurfaceError::ArcCountMismatch {
                triangle: first,
                found: interior,
                expected: class.expected_arcs(),
            });
        }
        Ok(class)
    }

    /// Start and end vertex classes of a side.
    pub(crate) fn side_ends(&self, topo: &Topology, s: SideId) -> (usize, usize) {
        let (t, k) = self.loc[&s];
        (topo.corner_class[t][k], topo.corner_class[t][(k + 1) % 3])
    }

    /// Un-pairs the listed edges, keeping every component.
    pub(crate) fn cut_keep_all(&self, arcs: &BTreeSet<EdgeId>) -> Result<Self, SurfaceError> {
        let mut out = self.clone();
        for &e in arcs {
            let (a, b) = self.edge_sides(e).ok_or(SurfaceError::UnknownEdge(e))?;
            out.partner.remove(&a);
            out.partner.remove(&b);
            out.provenance.insert(
                a,
                Provenance::ArcCopy {
                    arc: e,
                    side: ArcSide::Left,
                },
            );
            out.provenance.insert(
                b,
                Provenance::ArcCopy {
                    arc: e,
                    side: ArcSide::Right,
                },
            );
            if out.partial.remove(&e) {
                out.cut_partial.insert(e);
            }
        }
        Ok(out)
    }

    /// Cuts along the listed interior edges. Triangle components created by the
    /// cut are dropped and recorded in `removed`.
    pub fn cut(&self, arcs: &BTreeSet<EdgeId>) -> Result<Self, SurfaceError> {
        let mut out = self.cut_keep_all(arcs)?;
        let topo = out.topology();
        let mut drop = BTreeSet::new();
        for comp in &topo.components {
            if comp.len() != 1 {
                continue;
            }
            let t = out.triangles[comp[0]];
            let all_boundary = t.sides.iter().all(|s| !out.partner.contains_key(s));
            let created = t
                .sides
                .iter()
                .any(|s| matches!(out.provenance.get(s), Some(Provenance::ArcCopy { .. })));
            if all_boundary && created {
                drop.insert(comp[0]);
            }
        }
        if drop.is_empty() {
            return Ok(out);
        }
        let mut kept = Vec::new();
        for (i, t) in out.triangles.iter().enumerate() {
            if drop.contains(&i) {
                let boundary = t
                    .sides
                    .iter()
                    .map(|&s| (s, out.provenance(s).unwrap()))
                    .collect();
                out.removed.push(RemovedComponent {
                    triangle: *t,
                    boundary,
                });
                for s in t.sides {
                    out.provenance.remove(&s);
                }
            } else {
                kept.push(*t);
            }
        }
        out.triangles = kept;
        out.loc = Self::index(&out.triangles)?;
        Ok(out)
    }

    /// Glues the two copies of each listed arc back together.
    pub fn reglue(&self, arcs: &BTreeSet<EdgeId>) -> Result<Self, SurfaceError> {
        let mut copies = BTreeMap::new();
        for (&s, p) in &self.provenance {
            if let Provenance::ArcCopy { arc, side } = *p {
                copies.insert((arc, side), s);
            }
        }
        let mut out = self.clone();
        for &arc in arcs {
            let find = |side| {
                copies
                    .get(&(arc, side))
                    .copied()
                    .ok_or(SurfaceError::MissingCopy { arc, side })
            };
            let l = find(ArcSide::Left)?;
            let r = find(ArcSide::Right)?;
            out.partner.insert(l, r);
            out.partner.insert(r, l);
            out.provenance.remove(&l);
            out.provenance.remove(&r);
            if out.cut_partial.remove(&arc) {
                out.partial.insert(l.min(r));
            }
        }
        Ok(out)
    }

    /// Replaces an interior edge by the other diagonal of its quadrilateral.
    /// The edge keeps its id and its membership in the partial triangulation.
    pub fn flip(&self, e: EdgeId) -> Result<Self, SurfaceError> {
        let (s, s2) = self.edge_sides(e).ok_or(SurfaceError::UnknownEdge(e))?;
        let (t1, k1) = self.loc[&s];
        let (t2, k2) = self.loc[&s2];
        if t1 == t2 {
            return Err(SurfaceError::NotFlippable(e));
        }
        let r1 = self.triangles[t1].sides;
        let r2 = self.triangles[t2].sides;
        let (a, b) = (r1[(k1 + 1) % 3], r1[(k1 + 2) % 3]);
        let (c, d) = (r2[(k2 + 1) % 3], r2[(k2 + 2) % 3]);
        let mut out = self.clone();
        out.triangles[t1].sides = [s, b, c];
        out.triangles[t2].sides = [s2, d, a];
        out.loc = Self::index(&out.triangles)?;
        Ok(out)
    }

    /// Splits into connected components. Provenance, partial arcs and cut
    /// records travel with the component that owns them.
    pub fn components(&self) -> Vec<SurfaceComplex> {
        let topo = self.topology();
        topo.components
            .iter()
            .map(|comp| self.restrict(comp))
            .collect()
    }

    pub(crate) fn restrict(&self, comp: &[usize]) -> SurfaceComplex {
        let triangles: Vec<Triangle> = comp.iter().map(|&t| self.triangles[t]).collect();
        let loc = Self::index(&triangles).expect("sub-complex of a valid index");
        let partner: BTreeMap<_, _> = self
            .partner
            .iter()
            .filter(|(s, _)| loc.contains_key(s))
            .map(|(a, b)| (*a, *b))
            .collect();
        let provenance: BTreeMap<_, _> = self
            .provenance
            .iter()
            .filter(|(s, _)| loc.contains_key(s))
            .map(|(a, b)| (*a, *b))
            .collect();
        let arcs_here: BTreeSet<EdgeId> = provenance.values().filter_map(|p| p.arc()).collect();
        SurfaceComplex {
            partial: self
                .partial
                .iter()
                .filter(|e| partner.contains_key(e))
                .copied()
                .collect(),
            cut_partial: self
                .cut_partial
                .iter()
                .filter(|e| arcs_here.contains(e))
                .copied()
                .collect(),
            triangles,
            partner,
            provenance,
            removed: Vec::new(),
            loc,
        }
    }

    /// Disjoint union of complexes with pairwise distinct ids.
    pub fn disjoint_union(parts: &[SurfaceComplex]) -> Result<SurfaceComplex, SurfaceError> {
        let mut triangles = Vec::new();
        let mut partner = BTreeMap::new();
        let mut partial = BTreeSet::new();
        let mut provenance = BTreeMap::new();
        let mut cut_partial = BTreeSet::new();
        let mut removed = Vec::new();
        for p in parts {
            triangles.extend_from_slice(&p.triangles);
            partner.extend(p.partner.iter().map(|(a, b)| (*a, *b)));
            partial.extend(p.partial.iter().copied());
            provenance.extend(p.provenance.iter().map(|(a, b)| (*a, *b)));
            cut_partial.extend(p.cut_partial.iter().copied());
            removed.extend(p.removed.iter().cloned());
        }
        let ids: BTreeSet<_> = triangles.iter().map(|t| t.id).collect();
        if ids.len() != triangles.len() {
            return Err(SurfaceError::MalformedGluing(
                "triangle ids collide in union".into(),
            ));
        }
        let loc = Self::index(&triangles)?;
        Ok(SurfaceComplex {
            triangles,
            partner,
            partial,
            provenance,
            cut_partial,
            removed,
            loc,
        })
    }

    fn side_code(&self, s: SideId) -> u32 {
        match self.provenance(s) {
            Some(Provenance::OriginalBoundary(_)) => 0,
            Some(Provenance::ArcCopy {
                side: ArcSide::Left,
                ..
            }) => 1,
            Some(Provenance::ArcCopy {
                side: ArcSide::Right,
                ..
            }) => 2,
            None => 3,
        }
    }

    fn code_from(&self, start: usize, rot: usize) -> Vec<u32> {
        let mut label: BTreeMap<usize, (u32, usize)> = BTreeMap::new();
        let mut queue = VecDeque::new();
        label.insert(start, (0, rot));
        queue.push_back(start);
        let mut code = Vec::new();
        while let Some(t) = queue.pop_front() {
            let r = label[&t].1;
            for j in 0..3 {
                let s = self.triangles[t].sides[(r + j) % 3];
                match self.partner(s) {
                    Some(p) => {
                        let (t2, k2) = self.loc[&p];
                        if !label.contains_key(&t2) {
                            label.insert(t2, (label.len() as u32, k2));
                            queue.push_back(t2);
                        }
                        let (idx, r2) = label[&t2];
                        let e = s.min(p);
                        code.extend([
                            4,
                            idx,
                            ((k2 + 3 - r2) % 3) as u32,
                            self.partial.contains(&e) as u32,
                        ]);
                    }
                    None => code.push(self.side_code(s)),
                }
            }
        }
        code
    }

    /// Canonical code invariant under renaming of triangle and side ids.
    pub fn canonical_code(&self) -> Vec<Vec<u32>> {
        let topo = self.topology();
        let mut comps: Vec<Vec<u32>> = topo
            .components
            .iter()
            .map(|comp| {
                comp.iter()
                    .flat_map(|&t| (0..3).map(move |r| (t, r)))
                    .map(|(t, r)| self.code_from(t, r))
                    .min()
                    .unwrap_or_default()
            })
            .collect();
        comps.sort();
        comps
    }

    /// Combinatorial isomorphism preserving orientation, gluing, the partial
    /// triangulation and the kind of each boundary side.
    pub fn is_isomorphic(&self, other: &SurfaceComplex) -> bool {
        self.triangles.len() == other.triangles.len()
            && self.partner.len() == other.partner.len()
            && self.canonical_code() == other.canonical_code()
    }
}
