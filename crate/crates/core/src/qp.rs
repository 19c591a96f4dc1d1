//! Quivers with potential of triangulated surfaces.
//!
//! Paths are written left to right: `ab` is `a` followed by `b`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::quiver::VertexId;
use crate::surface::SurfaceComplex;

pub type ArrowId = u64;
pub type Path = Vec<ArrowId>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QpError {
    #[error("not a full triangulation: {0}")]
    NotFullTriangulation(String),
    #[error("vertex {0} lies on a 2-cycle")]
    TwoCycleAtK(VertexId),
    #[error("relations are not quadratic monomials: {0}")]
    NonQuadraticRelations(String),
    #[error("{0} is not a vertex")]
    UnknownVertex(VertexId),
    #[error("malformed quiver: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub id: ArrowId,
    pub src: VertexId,
    pub dst: VertexId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Quiver {
    vertices: BTreeSet<VertexId>,
    arrows: BTreeMap<ArrowId, Arrow>,
}

impl Quiver {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        arrows: impl IntoIterator<Item = Arrow>,
    ) -> Result<Self, QpError> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        let mut map = BTreeMap::new();
        for a in arrows {
            if !vertices.contains(&a.src) || !vertices.contains(&a.dst) {
                return Err(QpError::Malformed(format!("arrow {} has an unknown end", a.id)));
            }
            if map.insert(a.id, a).is_some() {
                return Err(QpError::Malformed(format!("arrow id {} used twice", a.id)));
            }
        }
        Ok(Quiver {
            vertices,
            arrows: map,
        })
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn arrows(&self) -> impl Iterator<Item = &Arrow> + '_ {
        self.arrows.values()
    }

    pub fn arrow(&self, id: ArrowId) -> Option<&Arrow> {
        self.arrows.get(&id)
    }

    /// Arrow counts per `(src, dst)`, ignoring ids.
    pub fn arrow_multiset(&self) -> BTreeMap<(VertexId, VertexId), u32> {
        let mut m = BTreeMap::new();
        for a in self.arrows.values() {
            *m.entry((a.src, a.dst)).or_insert(0) += 1;
        }
        m
    }

    /// Nonzero entries `b_ij = #(i -> j) - #(j -> i)`.
    pub fn exchange_matrix(&self) -> BTreeMap<(VertexId, VertexId), i64> {
        let mut b: BTreeMap<(VertexId, VertexId), i64> = BTreeMap::new();
        for a in self.arrows.values() {
            if a.src != a.dst {
                *b.entry((a.src, a.dst)).or_insert(0) += 1;
                *b.entry((a.dst, a.src)).or_insert(0) -= 1;
            }
        }
        b.retain(|_, v| *v != 0);
        b
    }

    fn from_exchange_matrix(
        vertices: &BTreeSet<VertexId>,
        b: &BTreeMap<(VertexId, VertexId), i64>,
    ) -> Quiver {
        let mut arrows = BTreeMap::new();
        let mut id = 0;
        for (&(i, j), &v) in b {
            for _ in 0..v.max(0) {
                arrows.insert(id, Arrow { id, src: i, dst: j });
                id += 1;
            }
        }
        Quiver {
            vertices: vertices.clone(),
            arrows,
        }
    }

    /// The quiver with every opposing pair of arrows cancelled.
    pub fn reduced(&self) -> Quiver {
        Self::from_exchange_matrix(&self.vertices, &self.exchange_matrix())
    }
}

/// Formal integer combination of paths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearCombination(BTreeMap<Path, i64>);

impl LinearCombination {
    pub fn add(&mut self, path: Path, coeff: i64) {
        let e = self.0.entry(path.clone()).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.0.remove(&path);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, i64)> + '_ {
        self.0.iter().map(|(p, c)| (p, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Path, i64)> for LinearCombination {
    fn from_iter<T: IntoIterator<Item = (Path, i64)>>(iter: T) -> Self {
        let mut out = LinearCombination::default();
        for (p, c) in iter {
            out.add(p, c);
        }
        out
    }
}

/// Least rotation of a cycle.
pub fn canonical_rotation(cycle: &[ArrowId]) -> Path {
    (0..cycle.len())
        .map(|r| [&cycle[r..], &cycle[..r]].concat())
        .min()
        .unwrap_or_default()
}

/// Cycles stored in canonical rotation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Potential(LinearCombination);

impl Potential {
    pub fn add_cycle(&mut self, cycle: &[ArrowId], coeff: i64) {
        self.0.add(canonical_rotation(cycle), coeff);
    }

    pub fn cycles(&self) -> impl Iterator<Item = (&Path, i64)> + '_ {
        self.0.terms()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuiverWithPotential {
    pub quiver: Quiver,
    pub potential: Potential,
}

impl QuiverWithPotential {
    pub fn new(quiver: Quiver, potential: Potential) -> Result<Self, QpError> {
        for (c, _) in potential.cycles() {
            let arrows: Option<Vec<&Arrow>> = c.iter().map(|a| quiver.arrow(*a)).collect();
            let arrows = arrows
                .ok_or_else(|| QpError::Malformed(format!("cycle {c:?} uses an unknown arrow")))?;
            let closed = (0..arrows.len()).all(|x| arrows[x].dst == arrows[(x + 1) % arrows.len()].src);
            if arrows.is_empty() || !closed {
                return Err(QpError::Malformed(format!("{c:?} is not a cycle")));
            }
        }
        Ok(QuiverWithPotential { quiver, potential })
    }

    /// All nonzero cyclic derivatives.
    pub fn relations(&self) -> Vec<LinearCombination> {
        self.quiver
            .arrows()
            .map(|a| cyclic_derivative(&self.potential, a.id))
            .filter(|r| !r.is_zero())
            .collect()
    }
}

/// One vertex per interior edge and one arrow per pair of consecutive interior
/// sides of a triangle. Arrow `3t + k` runs from side `k` to side `k + 1` of
/// triangle `t`. The potential sums the 3-cycles of internal triangles.
pub fn qp_from_triangulation(x: &SurfaceComplex) -> Result<QuiverWithPotential, QpError> {
    x.validate()
        .map_err(|e| QpError::NotFullTriangulation(e.to_string()))?;
    let mut arrows = Vec::new();
    let mut potential = Potential::default();
    for t in x.triangles() {
        let edges: Vec<Option<VertexId>> = t.sides.iter().map(|&s| x.edge_of(s)).collect();
        for k in 0..3 {
            if let (Some(a), Some(b)) = (edges[k], edges[(k + 1) % 3]) {
                arrows.push(Arrow {
                    id: 3 * t.id as ArrowId + k as ArrowId,
                    src: a,
                    dst: b,
                });
            }
        }
        if edges.iter().all(Option::is_some) {
            let base = 3 * t.id as ArrowId;
            potential.add_cycle(&[base, base + 1, base + 2], 1);
        }
    }
    let quiver = Quiver::new(x.interior_edges(), arrows)?;
    QuiverWithPotential::new(quiver, potential)
}

/// `∂_a(a_1 ... a_d) = Σ_{a_k = a} a_{k+1} ... a_d a_1 ... a_{k-1}`.
pub fn cyclic_derivative(w: &Potential, a: ArrowId) -> LinearCombination {
    let mut out = LinearCombination::default();
    for (cycle, coeff) in w.cycles() {
        for (k, &x) in cycle.iter().enumerate() {
            if x == a {
                let path: Path = cycle[k + 1..].iter().chain(&cycle[..k]).copied().collect();
                out.add(path, coeff);
            }
        }
    }
    out
}

/// Fomin-Zelevinsky mutation. Arrows of the result are renumbered from 0.
pub fn fz_mutate(q: &Quiver, k: VertexId) -> Result<Quiver, QpError> {
    if !q.vertices.contains(&k) {
        return Err(QpError::UnknownVertex(k));
    }
    let m = q.arrow_multiset();
    for &v in &q.vertices {
        if m.contains_key(&(v, k)) && m.contains_key(&(k, v)) {
            return Err(QpError::TwoCycleAtK(k));
        }
    }
    let b = q.exchange_matrix();
    let get = |i, j| b.get(&(i, j)).copied().unwrap_or(0);
    let mut nb = BTreeMap::new();
    for &i in &q.vertices {
        for &j in &q.vertices {
            if i == j {
                continue;
            }
            let v = if i == k || j == k {
                -get(i, j)
            } else {
                let (bik, bkj) = (get(i, k), get(k, j));
                get(i, j) + (bik.abs() * bkj + bik * bkj.abs()) / 2
            };
            if v != 0 {
                nb.insert((i, j), v);
            }
        }
    }
    Ok(Quiver::from_exchange_matrix(&q.vertices, &nb))
}

/// Removes the vertices, their arrows and every potential cycle through them.
pub fn qp_delete_vertex(qp: &QuiverWithPotential, removed: &BTreeSet<VertexId>) -> QuiverWithPotential {
    let vertices: BTreeSet<VertexId> = qp.quiver.vertices.difference(removed).copied().collect();
    let arrows: BTreeMap<ArrowId, Arrow> = qp
        .quiver
        .arrows
        .iter()
        .filter(|(_, a)| vertices.contains(&a.src) && vertices.contains(&a.dst))
        .map(|(k, a)| (*k, *a))
        .collect();
    let mut potential = Potential::default();
    for (c, coeff) in qp.potential.cycles() {
        if c.iter().all(|a| arrows.contains_key(a)) {
            potential.add_cycle(c, coeff);
        }
    }
    QuiverWithPotential {
        quiver: Quiver { vertices, arrows },
        potential,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GentleWitness {
    InDegree { vertex: VertexId, arrows: Vec<ArrowId> },
    OutDegree { vertex: VertexId, arrows: Vec<ArrowId> },
    /// Arrows composable before `arrow` that all are (or all are not) in a relation with it.
    Before { arrow: ArrowId, related: bool, arrows: Vec<ArrowId> },
    After { arrow: ArrowId, related: bool, arrows: Vec<ArrowId> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GentleVerdict {
    pub gentle: bool,
    pub witness: Option<GentleWitness>,
}

pub fn gentle_check(q: &Quiver, relations: &[LinearCombination]) -> Result<GentleVerdict, QpError> {
    let mut rel = BTreeSet::new();
    for r in relations {
        let terms: Vec<_> = r.terms().collect();
        let ok = terms.len() == 1 && terms[0].0.len() == 2;
        if !ok {
            return Err(QpError::NonQuadraticRelations(format!("{terms:?}")));
        }
        let p = terms[0].0;
        match (q.arrow(p[0]), q.arrow(p[1])) {
            (Some(a), Some(b)) if a.dst == b.src => {
                rel.insert((p[0], p[1]));
            }
            _ => return Err(QpError::NonQuadraticRelations(format!("{p:?} is not a path"))),
        }
    }
    let verdict = |w| {
        Ok(GentleVerdict {
            gentle: false,
            witness: Some(w),
        })
    };
    for &v in &q.vertices {
        let ins: Vec<ArrowId> = q.arrows().filter(|a| a.dst == v).map(|a| a.id).collect();
        let outs: Vec<ArrowId> = q.arrows().filter(|a| a.src == v).map(|a| a.id).collect();
        if ins.len() > 2 {
            return verdict(GentleWitness::InDegree { vertex: v, arrows: ins });
        }
        if outs.len() > 2 {
            return verdict(GentleWitness::OutDegree { vertex: v, arrows: outs });
        }
    }
    for b in q.arrows() {
        for related in [true, false] {
            let before: Vec<ArrowId> = q
                .arrows()
                .filter(|a| a.dst == b.src && rel.contains(&(a.id, b.id)) == related)
                .map(|a| a.id)
                .collect();
            if before.len() > 1 {
                return verdict(GentleWitness::Before {
                    arrow: b.id,
                    related,
                    arrows: before,
                });
            }
            let after: Vec<ArrowId> = q
                .arrows()
                .filter(|c| b.dst == c.src && rel.contains(&(b.id, c.id)) == related)
                .map(|c| c.id)
                .collect();
            if after.len() > 1 {
                return verdict(GentleWitness::After {
                    arrow: b.id,
                    related,
                    arrows: after,
                });
            }
        }
    }
    Ok(GentleVerdict {
        gentle: true,
        witness: None,
    })
}
