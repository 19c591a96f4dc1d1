//! JSON file formats and DOT rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charts::Periodicity;
use crate::qp::{Arrow, ArrowId, Potential, Quiver, QuiverWithPotential};
use crate::quiver::{ColouredQuiver, VertexId};
use crate::surface::{ArcSide, EdgeId, Provenance, SideId, SurfaceComplex, SurfaceError, Triangle};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("invalid file: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ProvenanceJson {
    Arc { arc: EdgeId, tag: ArcSide },
    Segment { segment: u32 },
}

#[derive(Serialize, Deserialize)]
struct BoundaryJson {
    side: SideId,
    provenance: ProvenanceJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceJson {
    triangles: Vec<Triangle>,
    gluing: Vec<[SideId; 2]>,
    #[serde(rename = "R", default)]
    r: Vec<EdgeId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    boundary: Vec<BoundaryJson>,
    /// Cut arcs that belonged to the partial triangulation; regluing restores them.
    #[serde(rename = "R_cut", default, skip_serializing_if = "Vec::is_empty")]
    r_cut: Vec<EdgeId>,
}

pub fn surface_to_json(x: &SurfaceComplex) -> String {
    let boundary = if x.has_custom_provenance() {
        x.boundary_provenance()
            .into_iter()
            .map(|(side, p)| BoundaryJson {
                side,
                provenance: match p {
                    Provenance::OriginalBoundary(segment) => ProvenanceJson::Segment { segment },
                    Provenance::ArcCopy { arc, side } => ProvenanceJson::Arc { arc, tag: side },
                },
            })
            .collect()
    } else {
        Vec::new()
    };
    let f = SurfaceJson {
        triangles: x.triangles().to_vec(),
        gluing: x.gluing_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
        r: x.partial().iter().copied().collect(),
        boundary,
        r_cut: x.cut_partial().iter().copied().collect(),
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

pub fn surface_from_json(s: &str) -> Result<SurfaceComplex, FormatError> {
    let f: SurfaceJson = serde_json::from_str(s)?;
    let gluing: Vec<(SideId, SideId)> = f.gluing.iter().map(|g| (g[0], g[1])).collect();
    let x = SurfaceComplex::new(f.triangles, &gluing, f.r)?;
    let x = x.with_provenance(f.boundary.into_iter().map(|b| {
        (
            b.side,
            match b.provenance {
                ProvenanceJson::Segment { segment } => Provenance::OriginalBoundary(segment),
                ProvenanceJson::Arc { arc, tag } => Provenance::ArcCopy { arc, side: tag },
            },
        )
    }))?;
    Ok(x.with_cut_partial(f.r_cut))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DJson {
    Finite(u64),
    Named(String),
}

#[derive(Serialize, Deserialize)]
struct QVertexJson {
    id: VertexId,
    d: DJson,
}

#[derive(Serialize, Deserialize)]
struct QArrowJson {
    src: VertexId,
    dst: VertexId,
    colour: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverJson {
    vertices: Vec<QVertexJson>,
    arrows: Vec<QArrowJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<[i64; 2]>,
}

pub fn quiver_to_json(q: &ColouredQuiver) -> String {
    let f = QuiverJson {
        vertices: q
            .periodicities()
            .iter()
            .map(|(&id, d)| QVertexJson {
                id,
                d: match d {
                    Periodicity::Finite(x) => DJson::Finite(*x),
                    Periodicity::Infinite => DJson::Named("inf".into()),
                },
            })
            .collect(),
        arrows: q
            .arrows()
            .flat_map(|((src, dst, colour), m)| {
                (0..m).map(move |_| QArrowJson { src, dst, colour })
            })
            .collect(),
        window: q.window().map(|(a, b)| [a, b]),
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

pub fn quiver_from_json(s: &str) -> Result<ColouredQuiver, FormatError> {
    let f: QuiverJson = serde_json::from_str(s)?;
    let mut d = Vec::new();
    for v in f.vertices {
        d.push((
            v.id,
            match v.d {
                DJson::Finite(0) => return Err(FormatError::Invalid("periodicity 0".into())),
                DJson::Finite(x) => Periodicity::Finite(x),
                DJson::Named(s) if s == "inf" => Periodicity::Infinite,
                DJson::Named(s) => {
                    return Err(FormatError::Invalid(format!("periodicity {s:?}")))
                }
            },
        ));
    }
    let window = f.window.map(|[a, b]| (a, b));
    if let Some((lo, hi)) = window {
        if lo > hi {
            return Err(FormatError::Invalid("empty colour window".into()));
        }
    }
    let mut q = ColouredQuiver::new(d, window);
    if q.periodicities().values().any(|p| *p == Periodicity::Infinite) && window.is_none() {
        return Err(FormatError::Invalid(
            "infinite periodicity needs a colour window".into(),
        ));
    }
    for a in f.arrows {
        if let Some(Periodicity::Finite(d)) = q.d(a.src) {
            if a.colour < 0 || a.colour >= d as i64 {
                return Err(FormatError::Invalid(format!(
                    "colour {} out of range at vertex {}",
                    a.colour, a.src
                )));
            }
        }
        q.add_arrow(a.src, a.dst, a.colour)
            .map_err(|e| FormatError::Invalid(e.to_string()))?;
    }
    Ok(q)
}

#[derive(Serialize, Deserialize)]
struct CycleJson {
    coeff: i64,
    cycle: Vec<ArrowId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QpJson {
    vertices: Vec<VertexId>,
    arrows: Vec<ArrowJson>,
    #[serde(default)]
    potential: Vec<CycleJson>,
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    id: ArrowId,
    src: VertexId,
    dst: VertexId,
}

pub fn qp_to_json(qp: &QuiverWithPotential) -> String {
    let f = QpJson {
        vertices: qp.quiver.vertices().iter().copied().collect(),
        arrows: qp
            .quiver
            .arrows()
            .map(|a| ArrowJson {
                id: a.id,
                src: a.src,
                dst: a.dst,
            })
            .collect(),
        potential: qp
            .potential
            .cycles()
            .map(|(c, coeff)| CycleJson {
                coeff,
                cycle: c.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

pub fn qp_from_json(s: &str) -> Result<QuiverWithPotential, FormatError> {
    let f: QpJson = serde_json::from_str(s)?;
    let quiver = Quiver::new(
        f.vertices,
        f.arrows.into_iter().map(|a| Arrow {
            id: a.id,
            src: a.src,
            dst: a.dst,
        }),
    )
    .map_err(|e| FormatError::Invalid(e.to_string()))?;
    let mut potential = Potential::default();
    for c in f.potential {
        potential.add_cycle(&c.cycle, c.coeff);
    }
    QuiverWithPotential::new(quiver, potential).map_err(|e| FormatError::Invalid(e.to_string()))
}

/// One edge per coloured arrow, labelled `(c)`.
pub fn quiver_to_dot(q: &ColouredQuiver) -> String {
    let mut out = String::from("digraph Q {\n");
    for (v, d) in q.periodicities() {
        let _ = writeln!(out, "  {v} [label=\"{v} (d={d})\"];");
    }
    for ((s, t, c), m) in q.arrows() {
        for _ in 0..m {
            let _ = writeln!(out, "  {s} -> {t} [label=\"({c})\"];");
        }
    }
    out.push_str("}\n");
    out
}

pub fn qp_to_dot(qp: &QuiverWithPotential) -> String {
    let mut out = String::from("digraph QP {\n");
    for v in qp.quiver.vertices() {
        let _ = writeln!(out, "  {v};");
    }
    let in_potential: BTreeMap<ArrowId, ()> = qp
        .potential
        .cycles()
        .flat_map(|(c, _)| c.iter().map(|a| (*a, ())))
        .collect();
    for a in qp.quiver.arrows() {
        let style = if in_potential.contains_key(&a.id) {
            ", style=dashed"
        } else {
            ""
        };
        let _ = writeln!(out, "  {} -> {} [label=\"a{}\"{style}];", a.src, a.dst, a.id);
    }
    out.push_str("}\n");
    out
}
