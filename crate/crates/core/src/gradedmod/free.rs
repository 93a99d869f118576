use std::collections::HashMap;
use std::sync::Arc;

use crate::exactla::{Rational, SparseMatrix, SparseVec};
use crate::polyring::{GradedPolyRing, Mono, Poly};

use super::GradedError;

/// A graded free module `⊕ Σ^{d_i} R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGraded {
    ring: Arc<GradedPolyRing>,
    degrees: Vec<i64>,
}

/// The ℚ-basis of a free module in one internal degree: pairs
/// (generator, standard monomial), ordered by generator then monomial.
#[derive(Clone, Debug)]
pub struct PieceBasis {
    entries: Vec<(usize, Mono)>,
    index: HashMap<(usize, Mono), usize>,
}

impl PieceBasis {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, i: usize) -> &(usize, Mono) {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[(usize, Mono)] {
        &self.entries
    }

    pub fn index_of(&self, gen: usize, m: &Mono) -> Option<usize> {
        self.index.get(&(gen, m.clone())).copied()
    }
}

impl FreeGraded {
    pub fn new(ring: Arc<GradedPolyRing>, degrees: Vec<i64>) -> Self {
        FreeGraded { ring, degrees }
    }

    pub fn zero(ring: Arc<GradedPolyRing>) -> Self {
        FreeGraded { ring, degrees: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<GradedPolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.iter().copied().min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.iter().copied().max()
    }

    pub fn shift(&self, k: i64) -> FreeGraded {
        FreeGraded { ring: self.ring.clone(), degrees: self.degrees.iter().map(|d| d + k).collect() }
    }

    pub fn direct_sum(&self, other: &FreeGraded) -> FreeGraded {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        FreeGraded { ring: self.ring.clone(), degrees }
    }

    /// Generators `e_i ⊗ f_j` indexed by `i * other.rank() + j`.
    pub fn tensor(&self, other: &FreeGraded) -> FreeGraded {
        let degrees = self
            .degrees
            .iter()
            .flat_map(|a| other.degrees.iter().map(move |b| a + b))
            .collect();
        FreeGraded { ring: self.ring.clone(), degrees }
    }

    pub fn basis(&self, d: i64) -> PieceBasis {
        let mut entries = Vec::new();
        for (g, gd) in self.degrees.iter().enumerate() {
            for m in self.ring.standard_monomials(d - gd).iter() {
                entries.push((g, m.clone()));
            }
        }
        let index = entries.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        PieceBasis { entries, index }
    }

    pub fn dim(&self, d: i64) -> usize {
        self.degrees.iter().map(|gd| self.ring.degree_piece_dim(d - gd)).sum()
    }

    /// Coordinates of a homogeneous element of degree `d`.
    pub fn to_vec(&self, elem: &[Poly], d: i64, basis: &PieceBasis) -> SparseVec {
        let mut pairs = Vec::new();
        for (g, p) in elem.iter().enumerate() {
            for (m, c) in p.terms() {
                let idx = basis
                    .index_of(g, m)
                    .unwrap_or_else(|| panic!("term of degree {} outside piece {d}", m.degree() + self.degrees[g]));
                pairs.push((idx, c.clone()));
            }
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn from_vec(&self, v: &SparseVec, basis: &PieceBasis) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.rank()];
        for (i, c) in v.iter() {
            let (g, m) = &basis.entries[*i];
            out[*g].add_term(m.clone(), c);
        }
        out
    }

    /// Degree of a nonzero homogeneous element, if it is homogeneous.
    pub fn element_degree(&self, elem: &[Poly]) -> Option<i64> {
        let mut deg = None;
        for (g, p) in elem.iter().enumerate() {
            for (m, _) in p.terms() {
                let e = m.degree() + self.degrees[g];
                match deg {
                    None => deg = Some(e),
                    Some(x) if x != e => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    /// Matrix of multiplication by a homogeneous `p`, from degree `d` to `d + |p|`.
    pub fn multiplication_matrix(&self, p: &Poly, d: i64) -> SparseMatrix {
        let k = p.degree().unwrap_or(0);
        let src = self.basis(d);
        let tgt = self.basis(d + k);
        let cols = src
            .entries
            .iter()
            .map(|(g, m)| {
                let prod = self.ring.mul_mono(m, p);
                let mut elem = vec![Poly::zero(); self.rank()];
                elem[*g] = prod;
                self.to_vec(&elem, d + k, &tgt)
            })
            .collect();
        SparseMatrix::from_columns(tgt.len(), cols)
    }
}

/// A homogeneous map of free modules given by a matrix of polynomials;
/// `columns[j][i]` is the coefficient of target generator `i` in the image
/// of source generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    source: FreeGraded,
    target: FreeGraded,
    columns: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn new(source: FreeGraded, target: FreeGraded, columns: Vec<Vec<Poly>>) -> Result<Self, GradedError> {
        if source.ring != target.ring {
            return Err(GradedError::RingMismatch);
        }
        if columns.len() != source.rank() || columns.iter().any(|c| c.len() != target.rank()) {
            return Err(GradedError::Shape(format!(
                "expected {} columns of length {}",
                source.rank(),
                target.rank()
            )));
        }
        let ring = source.ring.clone();
        let columns: Vec<Vec<Poly>> =
            columns.into_iter().map(|c| c.into_iter().map(|p| ring.reduce(&p)).collect()).collect();
        for (j, col) in columns.iter().enumerate() {
            for (i, p) in col.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let want = source.degree(j) - target.degree(i);
                if p.degree() != Some(want) {
                    return Err(GradedError::NotHomogeneous(format!(
                        "entry ({i},{j}) = {} should have degree {want}",
                        ring.format_poly(p)
                    )));
                }
            }
        }
        Ok(PolyMatrix { source, target, columns })
    }

    pub fn zero(source: FreeGraded, target: FreeGraded) -> Self {
        let columns = vec![vec![Poly::zero(); target.rank()]; source.rank()];
        PolyMatrix { source, target, columns }
    }

    pub fn identity(f: &FreeGraded) -> Self {
        let ring = f.ring.clone();
        let columns = (0..f.rank())
            .map(|j| (0..f.rank()).map(|i| if i == j { ring.one() } else { Poly::zero() }).collect())
            .collect();
        PolyMatrix { source: f.clone(), target: f.clone(), columns }
    }

    /// Diagonal map multiplying each generator by the same homogeneous `p`;
    /// the source is the target shifted up by `|p|`.
    pub fn scalar(target: &FreeGraded, p: &Poly) -> Self {
        let k = p.degree().unwrap_or(0);
        let columns = (0..target.rank())
            .map(|j| (0..target.rank()).map(|i| if i == j { p.clone() } else { Poly::zero() }).collect())
            .collect();
        PolyMatrix { source: target.shift(k), target: target.clone(), columns }
    }

    pub fn ring(&self) -> &Arc<GradedPolyRing> {
        &self.source.ring
    }

    pub fn source(&self) -> &FreeGraded {
        &self.source
    }

    pub fn target(&self) -> &FreeGraded {
        &self.target
    }

    pub fn columns(&self) -> &[Vec<Poly>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[Poly] {
        &self.columns[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.columns[j][i]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(Poly::is_zero))
    }

    /// The induced linear map in internal degree `d`.
    pub fn evaluate(&self, d: i64) -> SparseMatrix {
        let src = self.source.basis(d);
        let tgt = self.target.basis(d);
        self.evaluate_with(&src, &tgt, d)
    }

    pub fn evaluate_with(&self, src: &PieceBasis, tgt: &PieceBasis, d: i64) -> SparseMatrix {
        let ring = self.ring();
        let cols = src
            .entries
            .iter()
            .map(|(j, m)| {
                let img: Vec<Poly> = self.columns[*j].iter().map(|p| ring.mul_mono(m, p)).collect();
                self.target.to_vec(&img, d, tgt)
            })
            .collect();
        SparseMatrix::from_columns(tgt.len(), cols)
    }

    /// Applies the map to an element of the source.
    pub fn apply(&self, elem: &[Poly]) -> Vec<Poly> {
        let ring = self.ring();
        let mut out = vec![Poly::zero(); self.target.rank()];
        for (j, a) in elem.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (i, p) in self.columns[j].iter().enumerate() {
                if !p.is_zero() {
                    out[i] = out[i].add(&ring.mul(a, p));
                }
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(other.target, self.source, "composing incompatible maps");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        PolyMatrix { source: other.source.clone(), target: self.target.clone(), columns }
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((&self.source, &self.target), (&other.source, &other.target));
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p.add(q)).collect())
            .collect();
        PolyMatrix { source: self.source.clone(), target: self.target.clone(), columns }
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        let columns = self.columns.iter().map(|col| col.iter().map(|p| p.scale(c)).collect()).collect();
        PolyMatrix { source: self.source.clone(), target: self.target.clone(), columns }
    }

    /// `[self | other]` with a common target.
    pub fn hconcat(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.target, other.target);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        PolyMatrix { source: self.source.direct_sum(&other.source), target: self.target.clone(), columns }
    }

    /// Block-diagonal map `self ⊕ other`.
    pub fn direct_sum(&self, other: &PolyMatrix) -> PolyMatrix {
        let tr = self.target.rank();
        let total = tr + other.target.rank();
        let mut columns = Vec::with_capacity(self.columns.len() + other.columns.len());
        for c in &self.columns {
            let mut col = c.clone();
            col.resize(total, Poly::zero());
            columns.push(col);
        }
        for c in &other.columns {
            let mut col = vec![Poly::zero(); tr];
            col.extend(c.iter().cloned());
            columns.push(col);
        }
        PolyMatrix {
            source: self.source.direct_sum(&other.source),
            target: self.target.direct_sum(&other.target),
            columns,
        }
    }

    /// `self ⊗ other` on tensor products of the free modules.
    pub fn tensor(&self, other: &PolyMatrix) -> PolyMatrix {
        let ring = self.ring().clone();
        let (tr2, sr2) = (other.target.rank(), other.source.rank());
        let mut columns = Vec::with_capacity(self.source.rank() * sr2);
        for a in 0..self.source.rank() {
            for b in 0..sr2 {
                let mut col = vec![Poly::zero(); self.target.rank() * tr2];
                for (i, p) in self.columns[a].iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    for (k, q) in other.columns[b].iter().enumerate() {
                        if !q.is_zero() {
                            col[i * tr2 + k] = ring.mul(p, q);
                        }
                    }
                }
                columns.push(col);
            }
        }
        PolyMatrix {
            source: self.source.tensor(&other.source),
            target: self.target.tensor(&other.target),
            columns,
        }
    }

    /// Same matrix with source and target shifted by `k`.
    pub fn shift(&self, k: i64) -> PolyMatrix {
        PolyMatrix { source: self.source.shift(k), target: self.target.shift(k), columns: self.columns.clone() }
    }

    /// The dual map `Hom_R(target, R) → Hom_R(source, R)` (the transpose,
    /// with generator degrees negated).
    pub fn transpose(&self) -> PolyMatrix {
        let source = FreeGraded::new(self.ring().clone(), self.target.degrees.iter().map(|d| -d).collect());
        let target = FreeGraded::new(self.ring().clone(), self.source.degrees.iter().map(|d| -d).collect());
        let columns = (0..self.target.rank())
            .map(|i| (0..self.source.rank()).map(|j| self.columns[j][i].clone()).collect())
            .collect();
        PolyMatrix { source, target, columns }
    }

    /// Restricts to a subset of source generators.
    pub fn select_columns(&self, keep: &[usize]) -> PolyMatrix {
        let source = FreeGraded::new(self.ring().clone(), keep.iter().map(|j| self.source.degree(*j)).collect());
        let columns = keep.iter().map(|j| self.columns[*j].clone()).collect();
        PolyMatrix { source, target: self.target.clone(), columns }
    }

    /// Rebuilds with a different target of the same rank and degrees.
    pub fn with_source_degrees(&self, degrees: Vec<i64>) -> Result<PolyMatrix, GradedError> {
        PolyMatrix::new(FreeGraded::new(self.ring().clone(), degrees), self.target.clone(), self.columns.clone())
    }
}
