//! Combinatorial models of unpunctured marked surfaces: triangulated
//! complexes, twists of arcs, coloured quivers and their mutation, and
//! quivers with potential.

pub mod builders;
pub mod charts;
pub mod harness;
pub mod io;
pub mod qp;
pub mod quiver;
pub mod surface;
pub mod typea;

pub use charts::{AnnulusArc, Chart, ChartArc, DiskArc, Periodicity};
pub use harness::RunReport;
pub use qp::{Quiver, QuiverWithPotential};
pub use quiver::{coloured_quiver, mutate, ColouredQuiver, QuiverError};
pub use surface::{SurfaceComplex, SurfaceError};
