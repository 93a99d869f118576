//! Exact computations with graded modules over graded polynomial rings:
//! Koszul complexes and their towers, adic and derived completion, local
//! homology, and Adams-type spectral sequence inputs.

pub mod adams;
pub mod completion;
pub mod exactla;
pub mod gradedmod;
pub mod koszul;
pub mod polyring;
pub mod towers;
