//! Finitely presented graded modules and bounded chain complexes over a
//! graded polynomial ring.
//!
//! Differentials and module maps have internal degree 0, so each internal
//! degree is an independent finite-dimensional problem. Homological degree
//! follows the chain convention: differentials lower it by one.

mod complex;
mod dual;
mod free;
mod hom;
mod module;

pub use complex::{ChainComplex, ChainMap, EvaluatedComplex, HomologyPiece, HomologyTable, LinComplex};
pub use dual::{graded_dual, DegreewiseModule};
pub use free::{FreeGraded, PieceBasis, PolyMatrix};
pub use hom::{ext, free_resolution, hom_complex, hom_degreewise, hom_into, ExtTable, HomPiece, Resolution};
pub use module::{induced_piece_map, FPGradedModule, ModulePiece, Window};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error("objects live over different rings")]
    RingMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("map does not respect relations: {0}")]
    NotWellDefined(String),
    #[error("d∘d ≠ 0 out of homological degree {0}")]
    NotAComplex(i64),
    #[error("not a chain map: square into homological degree {0} does not commute")]
    NotChainMap(i64),
    #[error("operation needs a complex of free modules")]
    NotFree,
    #[error("empty window [{lo}, {hi}]")]
    BadWindow { lo: i64, hi: i64 },
}

#[cfg(test)]
mod tests;
