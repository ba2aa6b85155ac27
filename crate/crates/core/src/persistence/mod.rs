//! Cubical persistent homology of nested pixel sets over Z/2.
//!
//! Every black pixel is a closed unit square (vertices, edges and the square itself),
//! so pixels touching at a corner share a vertex and the black set is 8-connected.
//! Cells enter the filtration at the first position where an incident pixel is present.

mod complex;
mod diagram;
pub mod oracle;
mod reduce;

pub use complex::{CellDim, CubicalComplex};
pub use diagram::{
    betti_at, decompose_closing, decompose_opening, gap_scale, labeled_from_csv, labeled_to_csv,
    BettiPair, ClosingDecomposition,
    Death, LabeledPair, OpeningDecomposition, PersistenceDiagram, PersistencePair,
};
pub use reduce::{compute_persistence, compute_persistence_with, Reduction};

use crate::filtration::OneParamFiltration;

/// Cubical complex of `filt` and its persistence diagram in one step.
pub fn filtration_diagram(filt: &OneParamFiltration) -> PersistenceDiagram {
    compute_persistence(&CubicalComplex::build(filt))
}

pub fn build_complex(filt: &OneParamFiltration) -> CubicalComplex {
    CubicalComplex::build(filt)
}
