use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::free::{FreeGraded, PieceBasis, PolyMatrix};
use super::GradedError;
use crate::exactla::{QuotientSpace, SparseMatrix, SparseVec, Subspace};
use crate::polyring::{in_image, GradedPolyRing, Poly};

/// A range of internal degrees `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self, GradedError> {
        if lo > hi {
            return Err(GradedError::BadWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn height(&self) -> i64 {
        self.hi - self.lo
    }

    pub fn contains(&self, d: i64) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn negated(&self) -> Window {
        Window { lo: -self.hi, hi: -self.lo }
    }
}

/// A finitely presented graded module: the cokernel of `relations`, a map
/// of free modules into `generators`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPGradedModule {
    relations: PolyMatrix,
}

/// One internal degree of a module: the free module's basis and the
/// quotient coordinates modulo the relations.
#[derive(Clone, Debug)]
pub struct ModulePiece {
    pub degree: i64,
    pub basis: PieceBasis,
    pub quotient: QuotientSpace,
}

impl ModulePiece {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Element of the free cover representing quotient coordinate `i`.
    pub fn representative(&self, i: usize) -> SparseVec {
        SparseVec::unit(self.quotient.representative(i))
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.quotient.project(v)
    }
}

impl FPGradedModule {
    pub fn new(relations: PolyMatrix) -> Self {
        FPGradedModule { relations }
    }

    pub fn free(f: FreeGraded) -> Self {
        let src = FreeGraded::zero(f.ring().clone());
        FPGradedModule { relations: PolyMatrix::zero(src, f) }
    }

    /// The ring itself shifted so its generator sits in degree `k`.
    pub fn ring_shifted(ring: &Arc<GradedPolyRing>, k: i64) -> Self {
        Self::free(FreeGraded::new(ring.clone(), vec![k]))
    }

    /// `Σ^k R/(polys)` for a cyclic module generated in degree `k`.
    pub fn cyclic(ring: &Arc<GradedPolyRing>, k: i64, polys: &[Poly]) -> Result<Self, GradedError> {
        let target = FreeGraded::new(ring.clone(), vec![k]);
        let mut degrees = Vec::new();
        let mut cols = Vec::new();
        for p in polys {
            let p = ring.reduce(p);
            if p.is_zero() {
                continue;
            }
            let d = p.degree().ok_or_else(|| GradedError::NotHomogeneous(ring.format_poly(&p)))?;
            degrees.push(k + d);
            cols.push(vec![p]);
        }
        Ok(FPGradedModule::new(PolyMatrix::new(FreeGraded::new(ring.clone(), degrees), target, cols)?))
    }

    /// The residue field ℚ = R/(all variables), in degree 0.
    pub fn residue_field(ring: &Arc<GradedPolyRing>) -> Self {
        let vars: Vec<Poly> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        Self::cyclic(ring, 0, &vars).expect("variables are homogeneous")
    }

    pub fn ring(&self) -> &Arc<GradedPolyRing> {
        self.relations.ring()
    }

    pub fn generators(&self) -> &FreeGraded {
        self.relations.target()
    }

    pub fn relations(&self) -> &PolyMatrix {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_zero()
    }

    pub fn evaluate(&self, d: i64) -> ModulePiece {
        let basis = self.generators().basis(d);
        let rel = self.relations.evaluate_with(&self.relations.source().basis(d), &basis, d);
        let quotient = QuotientSpace::new(Subspace::span(basis.len(), rel.columns()));
        ModulePiece { degree: d, basis, quotient }
    }

    pub fn dim(&self, d: i64) -> usize {
        self.evaluate(d).dim()
    }

    /// Degreewise dimensions over a window.
    pub fn dims(&self, w: Window) -> Vec<(i64, usize)> {
        w.degrees().map(|d| (d, self.dim(d))).collect()
    }

    /// `Σ^k M`: the degree-`d` piece is the degree-`(d−k)` piece of `M`.
    pub fn shift(&self, k: i64) -> Self {
        FPGradedModule { relations: self.relations.shift(k) }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, GradedError> {
        if self.ring() != other.ring() {
            return Err(GradedError::RingMismatch);
        }
        Ok(FPGradedModule { relations: self.relations.direct_sum(&other.relations) })
    }

    /// `M ⊗_R N` presented by `[P ⊗ 1 | 1 ⊗ Q]` on `F₀ ⊗ G₀`.
    pub fn tensor(&self, other: &Self) -> Result<Self, GradedError> {
        if self.ring() != other.ring() {
            return Err(GradedError::RingMismatch);
        }
        let left = self.relations.tensor(&PolyMatrix::identity(other.generators()));
        let right = PolyMatrix::identity(self.generators()).tensor(&other.relations);
        Ok(FPGradedModule { relations: left.hconcat(&right) })
    }

    /// Whether `v` (homogeneous of degree `d`, in the free cover) is zero in the module.
    pub fn is_zero_element(&self, v: &[Poly], d: i64) -> bool {
        v.iter().all(Poly::is_zero) || in_image(&self.relations, v, d)
    }

    /// Largest degree with a nonzero piece, if the module is finite
    /// dimensional and this is detected before `search_limit`. Past the top
    /// generator degree, a run of zero pieces as long as the largest variable
    /// degree forces every higher piece to vanish.
    pub fn top_degree(&self, search_limit: i64) -> Option<i64> {
        let gens = self.generators();
        let Some(lo) = gens.min_degree() else { return Some(i64::MIN) };
        let top_gen = gens.max_degree().unwrap();
        let maxw = self.ring().var_degrees().iter().copied().max().unwrap_or(1);
        let mut last_nonzero = lo - 1;
        let mut run = 0;
        for d in lo..=search_limit {
            if self.dim(d) > 0 {
                last_nonzero = d;
                run = 0;
            } else if d > top_gen {
                run += 1;
                if run >= maxw {
                    return Some(last_nonzero);
                }
            }
        }
        None
    }
}

/// Matrix, in quotient coordinates, of the map of modules induced by a map
/// `a` of their free covers.
pub fn induced_piece_map(a: &PolyMatrix, src: &ModulePiece, tgt: &ModulePiece) -> SparseMatrix {
    let d = src.degree;
    let full = a.evaluate_with(&src.basis, &tgt.basis, d);
    let cols = (0..src.dim())
        .map(|i| tgt.project(&full.apply(&src.representative(i))))
        .collect();
    SparseMatrix::from_columns(tgt.dim(), cols)
}
